use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::candidates::generate_candidates;
use super::directions::generate_directions;
use super::simplex::minimize_in_hull;
use super::FitConfig;
use crate::depth::{Coefficients, Dataset, Direction, UnfitnessEvaluator};
use crate::error::Result;
use crate::rng;

/// Output of [`fit_prd`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub beta: Coefficients,
    pub prd: f64,
    pub uf: f64,
    /// Replicate that produced the answer (lowest index among tied ones).
    pub replicate_best: usize,
    /// Unfitness evaluations over all replicates, refinement included.
    pub candidates_evaluated: usize,
    /// Lowest unfitness among the simplex seeds of `replicate_best`.
    pub seed_uf: f64,
}

struct Replicate {
    beta: Vec<f64>,
    uf: f64,
    seed_uf: f64,
    evaluated: usize,
    directions: Vec<Direction>,
}

/// Approximate deepest projection-regression fit.
///
/// Each replicate scores exact-fit candidates on a frozen direction set,
/// refines the `p + 1` best by a simplex search inside their convex hull, and
/// the deepest replicate wins. Replicates whose depth is within
/// `refine_tol` of the best are averaged and the average is re-scored on the
/// directions of the lowest-index tied replicate.
pub fn fit_prd(data: &Dataset, config: &FitConfig) -> Result<FitResult> {
    config.validate(data.n(), data.p())?;
    let outcomes: Vec<Result<Replicate>> = (0..config.replications)
        .into_par_iter()
        .map(|r| run_replicate(data, config, r))
        .collect();
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let evaluated: usize = outcomes.iter().map(|o| o.evaluated).sum();

    let prd = |o: &Replicate| 1.0 / (1.0 + o.uf);
    let best_prd = outcomes.iter().map(prd).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..outcomes.len())
        .filter(|&i| best_prd - prd(&outcomes[i]) <= config.refine_tol)
        .collect();
    let lead = &outcomes[tied[0]];
    if tied.len() == 1 {
        return Ok(FitResult {
            beta: Coefficients::from(lead.beta.clone()),
            prd: prd(lead),
            uf: lead.uf,
            replicate_best: tied[0],
            candidates_evaluated: evaluated,
            seed_uf: lead.seed_uf,
        });
    }
    let p = data.p();
    let mut avg = vec![0.0; p];
    for &i in &tied {
        avg.iter_mut().zip(&outcomes[i].beta).for_each(|(a, b)| *a += b);
    }
    avg.iter_mut().for_each(|a| *a /= tied.len() as f64);
    let ev = UnfitnessEvaluator::new(data, &lead.directions, config.inner, config.objective)?;
    let uf = ev.uf(&avg)?;
    Ok(FitResult {
        beta: Coefficients::from(avg),
        prd: 1.0 / (1.0 + uf),
        uf,
        replicate_best: tied[0],
        candidates_evaluated: evaluated + 1,
        seed_uf: lead.seed_uf,
    })
}

fn run_replicate(data: &Dataset, config: &FitConfig, replicate: usize) -> Result<Replicate> {
    let mut rng = rng::stream(config.seed, replicate as u64);
    let candidates = generate_candidates(data, config.n_beta, &mut rng)?;
    let directions = generate_directions(data, config.n_dir, &mut rng);
    let ev = UnfitnessEvaluator::new(data, &directions, config.inner, config.objective)?;

    let keep = (data.p() + 1).min(candidates.len());
    let best = lowest_unfitness(&ev, &candidates, keep)?;
    let seeds: Vec<Vec<f64>> = best.iter().map(|&(_, i)| candidates[i].to_vec()).collect();
    let values: Vec<f64> = best.iter().map(|&(u, _)| u).collect();
    let outcome = minimize_in_hull(
        &seeds,
        &values,
        |b| ev.uf(b),
        config.refine_max_iter,
        config.refine_tol,
    )?;
    Ok(Replicate {
        beta: outcome.point,
        uf: outcome.value,
        seed_uf: values[0],
        evaluated: candidates.len() + outcome.evaluations,
        directions,
    })
}

/// The `keep` candidates of lowest unfitness as `(uf, index)`, ascending,
/// ties broken by index. Candidates that cannot enter the current top set
/// are abandoned as soon as one direction proves it.
fn lowest_unfitness(
    ev: &UnfitnessEvaluator<'_>,
    candidates: &[Coefficients],
    keep: usize,
) -> Result<Vec<(f64, usize)>> {
    let mut top: Vec<(f64, usize)> = Vec::with_capacity(keep + 1);
    for (i, c) in candidates.iter().enumerate() {
        let cutoff = if top.len() == keep { top[keep - 1].0 } else { f64::INFINITY };
        let u = ev.uf_until(c, cutoff)?;
        if top.len() == keep && u >= cutoff {
            continue;
        }
        let pos = top.partition_point(|&(v, _)| v <= u);
        top.insert(pos, (u, i));
        top.truncate(keep);
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::{InnerEstimatorSpec, ObjectiveSpec};

    #[test]
    fn noiseless_fit_is_exact() {
        let x = [0.3, 1.1, 2.0, 2.7, 4.2, 5.0, 6.6, 7.1];
        let y: Vec<f64> = x.iter().map(|v| 2.0 + 0.5 * v).collect();
        let d = Dataset::simple(&x, &y).unwrap();
        let r = fit_prd(&d, &FitConfig::for_sample(8, 2)).unwrap();
        assert_eq!(r.prd, 1.0);
        assert!((r.beta[0] - 2.0).abs() < 1e-12 && (r.beta[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn top_set_matches_full_sort() {
        let x: Vec<f64> = (0..15).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let y: Vec<f64> = (0..15).map(|i| (i as f64 * 1.3).cos() + 0.2 * x[i]).collect();
        let d = Dataset::simple(&x, &y).unwrap();
        let mut rng = rng::stream(5, 0);
        let cands = generate_candidates(&d, 200, &mut rng).unwrap();
        let dirs = generate_directions(&d, 40, &mut rng);
        let ev = UnfitnessEvaluator::new(&d, &dirs, InnerEstimatorSpec::Median, ObjectiveSpec::AbsOfMedian)
            .unwrap();
        let top = lowest_unfitness(&ev, &cands, 3).unwrap();
        let mut all: Vec<(f64, usize)> = cands.iter().enumerate().map(|(i, c)| (ev.uf(c).unwrap(), i)).collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        assert_eq!(top, all[..3].to_vec());
    }

    #[test]
    fn refinement_does_not_increase_unfitness() {
        let x: Vec<f64> = (0..20).map(|i| ((i * 13) % 17) as f64 / 3.0).collect();
        let y: Vec<f64> = (0..20).map(|i| x[i] * 0.7 + ((i * 5) % 7) as f64 - 3.0).collect();
        let d = Dataset::simple(&x, &y).unwrap();
        let mut cfg = FitConfig::for_sample(20, 2);
        cfg.replications = 3;
        let r = fit_prd(&d, &cfg).unwrap();
        assert!(r.uf <= r.seed_uf);
        assert!((r.prd - 1.0 / (1.0 + r.uf)).abs() == 0.0);
        assert_eq!(fit_prd(&d, &cfg).unwrap(), r);
    }
}
