use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{contaminate, ContaminationPoint, NormalModel};
use crate::error::{Error, Result};
use crate::estimators::{fit_prd, FitConfig};
use crate::oracle::{mb_bounds, DistSpec};
use crate::rng;

const MB_TAG: u64 = 0x4D42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMB {
    pub epsilon: f64,
    pub n: usize,
    /// Rows replaced, `floor(epsilon n)`.
    pub m: usize,
    pub grid: Vec<ContaminationPoint>,
    /// `||beta_hat - beta_hat_clean||` per grid point.
    pub biases: Vec<f64>,
    pub max_bias: f64,
    pub argmax_point: Option<ContaminationPoint>,
    pub oracle_lower: f64,
    pub oracle_upper: f64,
}

/// Leverage points `x0 = a u`, `y0 = k a` for magnitudes `a` up to `1e3`,
/// slopes `k` in `(0, 3]` and `u` the first axis or the first diagonal.
pub fn default_leverage_grid(p: usize) -> Vec<ContaminationPoint> {
    let mut axes = vec![unit(p, &[0])];
    if p > 1 {
        axes.push(unit(p, &[0, 1]));
    }
    let mut grid = Vec::new();
    for u in &axes {
        for a in [10.0, 100.0, 1000.0] {
            for k in 1..=12 {
                let slope = k as f64 * 0.25;
                grid.push(ContaminationPoint { y0: slope * a, x0: u.iter().map(|c| c * a).collect() });
            }
        }
    }
    grid
}

fn unit(p: usize, on: &[usize]) -> Vec<f64> {
    let c = 1.0 / (on.len() as f64).sqrt();
    (0..p).map(|j| if on.contains(&j) { c } else { 0.0 }).collect()
}

/// Largest displacement of the deepest fit over `grid` when `floor(eps n)`
/// rows of one base sample are replaced by jittered copies of a grid point.
///
/// The base sample and every fit use `config.seed`, so results for
/// different `epsilon` share the same clean sample.
pub fn empirical_mb(
    model: &NormalModel,
    n: usize,
    epsilon: f64,
    grid: &[ContaminationPoint],
    config: &FitConfig,
) -> Result<EmpiricalMB> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    if grid.iter().any(|z| z.x0.len() != model.p) {
        return Err(Error::InvalidInput("grid point dimension does not match the model".into()));
    }
    let normal = DistSpec::standard_normal();
    let j = DistSpec::ratio_of_normals(&normal, &normal)?;
    let bounds = mb_bounds(&j, &normal, epsilon)?;
    let m = (epsilon * n as f64).floor() as usize;

    let base = model.sample(n, &mut rng::stream(rng::derive_seed(config.seed, MB_TAG, 0), 0))?;
    let clean = fit_prd(&base, config)?;
    let biases: Vec<Result<f64>> = grid
        .par_iter()
        .enumerate()
        .map(|(g, z)| {
            if m == 0 {
                return Ok(0.0);
            }
            let mut jrng = rng::stream(rng::derive_seed(config.seed, MB_TAG, 1), g as u64);
            let data = contaminate(&base, m, z, &mut jrng)?;
            Ok(fit_prd(&data, config)?.beta.distance(&clean.beta))
        })
        .collect();
    let biases = biases.into_iter().collect::<Result<Vec<_>>>()?;
    let (arg, max_bias) = biases
        .iter()
        .copied()
        .enumerate()
        .fold((None, 0.0), |(ai, av), (i, v)| if v > av { (Some(i), v) } else { (ai, av) });
    Ok(EmpiricalMB {
        epsilon,
        n,
        m,
        grid: grid.to_vec(),
        biases,
        max_bias,
        argmax_point: arg.map(|i| grid[i].clone()),
        oracle_lower: bounds.mb_lower,
        oracle_upper: bounds.mb_upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_epsilon_has_no_bias() {
        let model = NormalModel { p: 2 };
        let grid = default_leverage_grid(2);
        let cfg = FitConfig::for_sample(20, 2);
        let r = empirical_mb(&model, 20, 0.0, &grid[..3], &cfg).unwrap();
        assert_eq!(r.max_bias, 0.0);
        assert_eq!(r.oracle_lower, 0.0);
        assert!(r.argmax_point.is_none());
    }

    #[test]
    fn grid_shape() {
        let g = default_leverage_grid(2);
        assert_eq!(g.len(), 72);
        assert!(g.iter().all(|z| z.x0.len() == 2));
        assert!((g.last().unwrap().x0[0] - 1000.0 / 2f64.sqrt()).abs() < 1e-9);
    }
}
