use std::collections::HashSet;

use rand::seq::index;

use crate::depth::{Coefficients, Dataset};
use crate::error::{Error, Result};
use crate::linalg::{binomial, next_combination, solve_in_place};
use crate::rng::Rng;

/// Exact-fit candidates from `p`-subsets of the rows.
///
/// When `C(n, p) <= n_beta` every subset is enumerated in lexicographic order;
/// otherwise distinct subsets are drawn at random. Singular subsets are
/// skipped. Random drawing stops after `n_beta` candidates or
/// `100 * n_beta` draws, whichever comes first.
pub fn generate_candidates(data: &Dataset, n_beta: usize, rng: &mut Rng) -> Result<Vec<Coefficients>> {
    let (n, p) = (data.n(), data.p());
    let total = binomial(n, p);
    let mut out = Vec::new();
    if total <= n_beta {
        let mut idx: Vec<usize> = (0..p).collect();
        loop {
            if let Some(beta) = exact_fit(data, &idx) {
                out.push(beta);
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        if out.is_empty() {
            return Err(Error::NoNonsingularSubset { p, attempts: total });
        }
        return Ok(out);
    }
    let max_attempts = n_beta.saturating_mul(100);
    let mut seen = HashSet::new();
    let mut attempts = 0;
    while out.len() < n_beta && attempts < max_attempts {
        attempts += 1;
        let mut idx = index::sample(rng, n, p).into_vec();
        idx.sort_unstable();
        if !seen.insert(idx.clone()) {
            continue;
        }
        if let Some(beta) = exact_fit(data, &idx) {
            out.push(beta);
        }
    }
    if out.is_empty() {
        return Err(Error::NoNonsingularSubset { p, attempts });
    }
    Ok(out)
}

/// The coefficient vector through the rows in `idx` (`|idx| = p`), if unique.
pub fn exact_fit(data: &Dataset, idx: &[usize]) -> Option<Coefficients> {
    let p = data.p();
    let mut a: Vec<f64> = idx.iter().flat_map(|&i| data.row(i).iter().copied()).collect();
    let mut b: Vec<f64> = idx.iter().map(|&i| data.y()[i]).collect();
    solve_in_place(&mut a, &mut b, p)?;
    b.iter().all(|v| v.is_finite()).then(|| Coefficients::from(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn noiseless_candidates_are_truth() {
        let x = [0.5, 1.0, 2.0, 3.5, 4.0, 7.0];
        let y: Vec<f64> = x.iter().map(|v| 1.0 - 2.0 * v).collect();
        let d = Dataset::simple(&x, &y).unwrap();
        for c in generate_candidates(&d, 5, &mut stream(1, 0)).unwrap() {
            assert!((c[0] - 1.0).abs() < 1e-12 && (c[1] + 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn n_equals_p_has_one_candidate() {
        let d = Dataset::simple(&[1.0, 2.0], &[0.0, 3.0]).unwrap();
        assert_eq!(generate_candidates(&d, 3, &mut stream(1, 0)).unwrap().len(), 1);
    }

    #[test]
    fn random_subsets_are_distinct() {
        let x: Vec<f64> = (0..30).map(|i| (i as f64).sqrt()).collect();
        let y: Vec<f64> = (0..30).map(|i| ((i * 7) % 11) as f64).collect();
        let d = Dataset::simple(&x, &y).unwrap();
        let c = generate_candidates(&d, 100, &mut stream(3, 0)).unwrap();
        assert_eq!(c.len(), 100);
        let again = generate_candidates(&d, 100, &mut stream(3, 0)).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn degenerate_design() {
        let d = Dataset::simple(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            generate_candidates(&d, 10, &mut stream(0, 0)),
            Err(Error::NoNonsingularSubset { .. })
        ));
    }
}
