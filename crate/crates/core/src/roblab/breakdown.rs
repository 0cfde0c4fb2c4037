use rand::seq::index;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::JITTER;
use crate::depth::Dataset;
use crate::error::{Error, Result};
use crate::estimators::{fit_prd, FitConfig};
use crate::linalg::{binomial, min_norm_solution, null_vector};
use crate::oracle::{rbp_formula, Fraction};
use crate::rng;

/// Coefficient-norm scales of the tilted hyperplane.
pub const TILT_SCHEDULE: [f64; 5] = [1e2, 1e3, 1e4, 1e5, 1e6];
const REDRAWS: usize = 20;
const RBP_TAG: u64 = 0x4B50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbpTrial {
    pub m: usize,
    /// `||beta_hat||` for each tilt in [`TILT_SCHEDULE`].
    pub norms: Vec<f64>,
    pub broke: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbpResult {
    pub n: usize,
    pub p: usize,
    pub escape_threshold: f64,
    /// Least number of replaced points that carried the fit away.
    pub m_break_empirical: Option<usize>,
    pub rbp_empirical: Option<Fraction>,
    pub rbp_formula: Fraction,
    /// `(tilt, ||beta_hat||)` at `m_break_empirical`.
    pub escalation_curve: Vec<(f64, f64)>,
    pub trials: Vec<RbpTrial>,
    /// Whether one point fewer kept the fit below the threshold for every
    /// tilt and every random placement; `None` when there is nothing to check.
    pub below_break_bounded: Option<bool>,
    /// Largest `||beta_hat||` seen in that check.
    pub below_break_max_norm: f64,
    pub matches_formula: bool,
}

/// Replaces `m = 1, 2, ...` points by points on a hyperplane through `p - 1`
/// original points, tilted ever closer to vertical, until the deepest fit
/// follows the hyperplane off to infinity.
///
/// Breakdown at `m` means `||beta_hat||` grows monotonically along
/// [`TILT_SCHEDULE`] and ends above `escape_threshold` (default
/// `1e3 (1 + ||beta_hat_clean||)`). For `m - 1` the fit must stay below the
/// threshold for the same construction and for 20 random placements.
pub fn rbp_experiment(data: &Dataset, config: &FitConfig, escape_threshold: Option<f64>) -> Result<RbpResult> {
    let (n, p) = (data.n(), data.p());
    if p < 2 {
        return Err(Error::UnsupportedDimension { p, expected: 2 });
    }
    let formula = rbp_formula(n, p)?;
    if binomial(n, p) <= 100_000 && !data.is_general_position() {
        return Err(Error::InvalidInput("breakdown experiment needs data in general position".into()));
    }
    let clean = fit_prd(data, config)?;
    let threshold = escape_threshold.unwrap_or(1e3 * (1.0 + clean.beta.norm()));

    let anchors: Vec<usize> = (0..p - 1).collect();
    let max_m = (n / 2 + 1).min(n - (p - 1));
    let mut trials = Vec::new();
    let mut m_break = None;
    for m in 1..=max_m {
        let replaced: Vec<usize> = (n - m..n).collect();
        let mut jrng = rng::stream(rng::derive_seed(config.seed, RBP_TAG, 0), m as u64);
        let xs: Vec<Vec<f64>> = replaced
            .iter()
            .map(|&i| data.x(i).iter().map(|v| v + JITTER * jrng.random_range(-1.0..1.0)).collect())
            .collect();
        let norms = tilt_norms(data, config, &anchors, &replaced, &xs)?;
        let broke = escalates(&norms, threshold);
        trials.push(RbpTrial { m, norms, broke });
        if broke {
            m_break = Some(m);
            break;
        }
    }

    let escalation_curve = match (m_break, trials.last()) {
        (Some(_), Some(t)) => TILT_SCHEDULE.iter().copied().zip(t.norms.iter().copied()).collect(),
        _ => Vec::new(),
    };
    let (below_break_bounded, below_break_max_norm) = match m_break {
        Some(m) if m > 1 => {
            let mut worst = trials[m - 2].norms.iter().copied().fold(0.0, f64::max);
            for k in 0..REDRAWS {
                let norms = random_placement(data, config, m - 1, k)?;
                worst = norms.into_iter().fold(worst, f64::max);
            }
            (Some(worst <= threshold), worst)
        }
        _ => (None, 0.0),
    };
    let rbp_empirical = m_break.map(|m| Fraction { num: m, den: n });
    let matches_formula = m_break == Some(formula.num) && below_break_bounded != Some(false);
    Ok(RbpResult {
        n,
        p,
        escape_threshold: threshold,
        m_break_empirical: m_break,
        rbp_empirical,
        rbp_formula: formula,
        escalation_curve,
        trials,
        below_break_bounded,
        below_break_max_norm,
        matches_formula,
    })
}

fn escalates(norms: &[f64], threshold: f64) -> bool {
    let monotone = norms.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    monotone && norms.last().is_some_and(|&v| v > threshold)
}

/// Fits the contaminated sample for each tilt and returns `||beta_hat||`.
fn tilt_norms(
    data: &Dataset,
    config: &FitConfig,
    anchors: &[usize],
    replaced: &[usize],
    xs: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let p = data.p();
    let rows: Vec<&[f64]> = anchors.iter().map(|&i| data.row(i)).collect();
    let rhs: Vec<f64> = anchors.iter().map(|&i| data.y()[i]).collect();
    let base = min_norm_solution(&rows, &rhs, p).ok_or(Error::RankDeficient)?;
    let dir = null_vector(&rows, p).ok_or(Error::RankDeficient)?;
    let fits: Vec<Result<f64>> = TILT_SCHEDULE
        .par_iter()
        .map(|&s| {
            let beta: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + s * d).collect();
            let mut contaminated = data.clone();
            for (&i, x) in replaced.iter().zip(xs) {
                let y = design_row(data, x).iter().zip(&beta).map(|(w, b)| w * b).sum();
                contaminated.replace_row(i, y, x)?;
            }
            Ok(fit_prd(&contaminated, config)?.beta.norm())
        })
        .collect();
    fits.into_iter().collect()
}

fn design_row(data: &Dataset, x: &[f64]) -> Vec<f64> {
    if data.with_intercept() {
        std::iter::once(1.0).chain(x.iter().copied()).collect()
    } else {
        x.to_vec()
    }
}

/// Random anchors, random replaced rows and random contaminant positions
/// inside the bounding box of the predictors.
fn random_placement(data: &Dataset, config: &FitConfig, m: usize, draw: usize) -> Result<Vec<f64>> {
    let (n, p) = (data.n(), data.p());
    let mut rng = rng::stream(rng::derive_seed(config.seed, RBP_TAG, 1), draw as u64);
    let picked = index::sample(&mut rng, n, p - 1 + m).into_vec();
    let anchors = &picked[..p - 1];
    let replaced = &picked[p - 1..];
    let q = data.x(0).len();
    let lo: Vec<f64> = (0..q).map(|j| (0..n).map(|i| data.x(i)[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..q).map(|j| (0..n).map(|i| data.x(i)[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let xs: Vec<Vec<f64>> = replaced
        .iter()
        .map(|_| (0..q).map(|j| lo[j] + (hi[j] - lo[j]) * rng.random_range(0.0..1.0)).collect())
        .collect();
    tilt_norms(data, config, anchors, replaced, &xs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escalation_rule() {
        assert!(escalates(&[1e2, 1e3, 1e4, 1e5, 1e6], 1e4));
        assert!(!escalates(&[1e2, 1e3, 1e4, 1e3, 1e6], 1e4));
        assert!(!escalates(&[1.0, 1.0, 1.0, 1.0, 1.0], 1e4));
    }
}
