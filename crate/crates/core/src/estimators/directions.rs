use rand_distr::{Distribution, StandardNormal};

use crate::depth::{Dataset, Direction};
use crate::linalg::{norm, orthonormal_basis, project_out};
use crate::rng::Rng;

/// Size of the first-coordinate perturbation applied to strategic directions.
pub const STRATEGIC_PERTURBATION: f64 = 1e-10;

/// Projection directions for one replicate.
///
/// When `n_dir >= 2n` the list starts with `2n` strategic directions, two per
/// row: a unit vector orthogonal to `w_i` nudged by `+/-1e-10` in its first
/// coordinate. The rest are uniform on the sphere.
pub fn generate_directions(data: &Dataset, n_dir: usize, rng: &mut Rng) -> Vec<Direction> {
    let (n, p) = (data.n(), data.p());
    let mut out = Vec::with_capacity(n_dir);
    if n_dir >= 2 * n {
        for w in data.rows() {
            let base = orthogonal_to(w, rng);
            for sign in [1.0, -1.0] {
                let mut v = base.clone();
                v[0] += sign * STRATEGIC_PERTURBATION;
                if let Ok(d) = Direction::new(v) {
                    out.push(d);
                }
            }
        }
    }
    while out.len() < n_dir {
        if let Ok(d) = Direction::new(gaussian(p, rng)) {
            out.push(d);
        }
    }
    out
}

fn gaussian(p: usize, rng: &mut Rng) -> Vec<f64> {
    (0..p).map(|_| StandardNormal.sample(rng)).collect()
}

/// A unit vector with `w'v = 0`: the explicit perpendicular `(w_2, -w_1)`
/// for `p = 2`, a random one from the orthogonal complement otherwise.
fn orthogonal_to(w: &[f64], rng: &mut Rng) -> Vec<f64> {
    let p = w.len();
    if p == 1 {
        return vec![1.0];
    }
    if p == 2 && norm(w) > 0.0 {
        let nw = norm(w);
        return vec![w[1] / nw, -w[0] / nw];
    }
    let basis = orthonormal_basis(&[w]);
    loop {
        let mut g = gaussian(p, rng);
        project_out(&mut g, &basis);
        let ng = norm(&g);
        if ng > 1e-8 {
            return g.into_iter().map(|v| v / ng).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;
    use crate::rng::stream;

    #[test]
    fn unit_norm_and_deterministic() {
        let d = Dataset::new(
            vec![1.0, 2.0, 0.5, 4.0],
            vec![vec![0.1, 2.0], vec![1.5, -1.0], vec![3.0, 0.3], vec![-2.0, 1.0]],
            true,
        )
        .unwrap();
        let a = generate_directions(&d, 20, &mut stream(9, 2));
        let b = generate_directions(&d, 20, &mut stream(9, 2));
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        for v in &a {
            assert!((norm(v) - 1.0).abs() < 1e-12);
        }
        // strategic block: nearly orthogonal to the matching row
        for i in 0..d.n() {
            assert!(dot(&a[2 * i], d.row(i)).abs() < 1e-9);
            assert!(dot(&a[2 * i + 1], d.row(i)).abs() < 1e-9);
        }
    }

    #[test]
    fn simple_regression_perpendicular() {
        let d = Dataset::simple(&[2.0, -1.0, 3.0], &[0.0, 1.0, 2.0]).unwrap();
        let dirs = generate_directions(&d, 6, &mut stream(0, 0));
        for (i, &x) in [2.0, -1.0, 3.0].iter().enumerate() {
            let v = &dirs[2 * i];
            // v is (x, -1) up to scale and a 1e-10 nudge
            assert!((-v[0] - v[1] * x).abs() < 1e-9);
        }
    }

    #[test]
    fn few_directions_are_all_random() {
        let d = Dataset::simple(&[2.0, -1.0, 3.0], &[0.0, 1.0, 2.0]).unwrap();
        let dirs = generate_directions(&d, 4, &mut stream(0, 0));
        assert_eq!(dirs.len(), 4);
    }
}
