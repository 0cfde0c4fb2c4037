use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{contaminate, ContaminationPoint, NormalModel};
use crate::error::{Error, Result};
use crate::estimators::{fit_prd, FitConfig};
use crate::rng;

const IF_TAG: u64 = 0x4946;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalIF {
    pub z: ContaminationPoint,
    pub n: usize,
    pub eps_schedule: Vec<f64>,
    /// Rows replaced for each `epsilon`.
    pub replaced: Vec<usize>,
    /// `(beta_hat(eps) - beta_hat_clean) / eps` for each `epsilon`, with
    /// `eps = replaced / n`.
    pub quotients: Vec<Vec<f64>>,
    /// Linear (Richardson) extrapolation to `eps = 0` from the two smallest
    /// `epsilon`.
    pub extrapolated: Vec<f64>,
}

/// Finite-difference influence of `z` on the deepest fit of one base sample
/// from `model`.
pub fn empirical_if(
    z: &ContaminationPoint,
    model: &NormalModel,
    n: usize,
    eps_schedule: &[f64],
    config: &FitConfig,
) -> Result<EmpiricalIF> {
    if eps_schedule.len() < 2 {
        return Err(Error::InvalidInput("need at least two contamination levels".into()));
    }
    if eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("contamination levels must be decreasing".into()));
    }
    if z.x0.len() != model.p {
        return Err(Error::InvalidInput("contamination point dimension does not match the model".into()));
    }
    let replaced: Vec<usize> = eps_schedule.iter().map(|e| (e * n as f64).floor() as usize).collect();
    if let Some(e) = eps_schedule.iter().zip(&replaced).find(|(e, &m)| e.is_nan() || **e >= 0.5 || m == 0) {
        return Err(Error::EpsilonOutOfRange(*e.0));
    }
    let base = model.sample(n, &mut rng::stream(rng::derive_seed(config.seed, IF_TAG, 0), 0))?;
    let clean = fit_prd(&base, config)?;
    let quotients: Vec<Result<Vec<f64>>> = replaced
        .par_iter()
        .enumerate()
        .map(|(k, &m)| {
            let mut jrng = rng::stream(rng::derive_seed(config.seed, IF_TAG, 1), k as u64);
            let data = contaminate(&base, m, z, &mut jrng)?;
            let fit = fit_prd(&data, config)?;
            let eps = m as f64 / n as f64;
            Ok(fit.beta.iter().zip(clean.beta.iter()).map(|(a, b)| (a - b) / eps).collect())
        })
        .collect();
    let quotients = quotients.into_iter().collect::<Result<Vec<_>>>()?;
    let k = quotients.len();
    let (e1, e2) = (replaced[k - 2] as f64 / n as f64, replaced[k - 1] as f64 / n as f64);
    let extrapolated = if e1 == e2 {
        quotients[k - 1].clone()
    } else {
        quotients[k - 2]
            .iter()
            .zip(&quotients[k - 1])
            .map(|(q1, q2)| (e1 * q2 - e2 * q1) / (e1 - e2))
            .collect()
    };
    Ok(EmpiricalIF {
        z: z.clone(),
        n,
        eps_schedule: eps_schedule.to_vec(),
        replaced,
        quotients,
        extrapolated,
    })
}
