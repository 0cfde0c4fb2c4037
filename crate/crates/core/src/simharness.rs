//! Monte-Carlo relative efficiency of the deepest lines against least
//! squares in simple regression with true coefficients `(0, 0)`.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, StandardNormal, StudentT};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::depth::{Dataset, InnerEstimatorSpec};
use crate::error::{Error, Result};
use crate::estimators::{fit_ls, fit_prd, fit_rd_simple, FitConfig};
use crate::rng::{self, Rng};

/// How many times a replicate is redrawn after a numerical failure.
const MAX_REDRAWS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XDist {
    /// Standard normal.
    Normal,
    /// Student t with 2 degrees of freedom.
    T2,
}

impl fmt::Display for XDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Normal => "normal",
            Self::T2 => "t2",
        })
    }
}

impl FromStr for XDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "normal" | "gaussian" => Ok(Self::Normal),
            "t2" | "t(2)" => Ok(Self::T2),
            other => Err(Error::InvalidInput(format!("unknown x distribution '{other}' (normal, t2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_values: Vec<usize>,
    pub n_rep: usize,
    pub x_dist: XDist,
    pub error_sigma: f64,
    pub inner: InnerEstimatorSpec,
    /// Template for the deepest fit. `n_beta` and `n_dir` are replaced per
    /// sample size by the [`FitConfig::for_sample`] rule; the seed is
    /// replaced per replicate.
    pub fit: FitConfig,
    pub seed: u64,
}

impl SimConfig {
    /// 500 replicates, unit error scale, median inner estimator.
    pub fn desk_scale(n_values: Vec<usize>, x_dist: XDist) -> Self {
        Self {
            n_values,
            n_rep: 500,
            x_dist,
            error_sigma: 1.0,
            inner: InnerEstimatorSpec::Median,
            fit: FitConfig::for_sample(10, 2),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rep < 2 {
            return Err(Error::InvalidInput("n_rep must be at least 2".into()));
        }
        if self.n_values.is_empty() || self.n_values.iter().any(|&n| n < 3) {
            return Err(Error::InvalidInput("every sample size must be at least 3".into()));
        }
        if !(self.error_sigma > 0.0 && self.error_sigma.is_finite()) {
            return Err(Error::InvalidInput("error_sigma must be positive".into()));
        }
        self.inner.validate()
    }

    /// Deepest-fit configuration for sample size `n` and replicate `rep`.
    pub fn fit_config(&self, n: usize, rep: usize) -> FitConfig {
        let rule = FitConfig::for_sample(n, 2);
        FitConfig {
            n_beta: rule.n_beta,
            n_dir: rule.n_dir,
            seed: rng::derive_seed(self.seed, FIT_TAG ^ n as u64, rep as u64),
            inner: self.inner,
            ..self.fit.clone()
        }
    }
}

const SAMPLE_TAG: u64 = 0x5A4D;
const FIT_TAG: u64 = 0xF17 << 32;

/// `n` draws of `x` from `x_dist` and `y = e ~ N(0, sigma^2)`; the true
/// coefficients are zero.
pub fn generate_sample(n: usize, x_dist: XDist, sigma: f64, rng: &mut Rng) -> Result<Dataset> {
    let x: Vec<f64> = match x_dist {
        XDist::Normal => (0..n).map(|_| StandardNormal.sample(rng)).collect(),
        XDist::T2 => {
            let t = StudentT::new(2.0).map_err(|e| Error::InvalidInput(e.to_string()))?;
            (0..n).map(|_| t.sample(rng)).collect()
        }
    };
    let y: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            sigma * z
        })
        .collect();
    Dataset::simple(&x, &y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Prd,
    Rd,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Prd => "PRD",
            Self::Rd => "RD",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRow {
    pub n: usize,
    pub x_dist: XDist,
    pub estimator: Estimator,
    pub re_slope: f64,
    pub re_intercept: f64,
    /// Delta-method Monte-Carlo standard errors of the two ratios.
    pub se_slope: f64,
    pub se_intercept: f64,
    pub n_rep: usize,
    pub mse_ls_slope: f64,
    pub mse_ls_intercept: f64,
    pub mse_slope: f64,
    pub mse_intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub rows: Vec<EfficiencyRow>,
    /// Replicates redrawn after a numerical failure, per sample size.
    pub redrawn: Vec<(usize, usize)>,
    pub error_sigma: f64,
    pub re_definition: String,
}

/// Squared coefficient errors of one replicate: `[ls, rd, prd]`, each
/// `(intercept^2, slope^2)`.
type RepErrors = [(f64, f64); 3];

/// Runs the study. Each replicate owns a random stream keyed by
/// `(seed, n, replicate)`, so the report does not depend on thread count.
pub fn relative_efficiency(sim: &SimConfig) -> Result<EfficiencyReport> {
    sim.validate()?;
    let mut rows = Vec::new();
    let mut redrawn = Vec::new();
    for &n in &sim.n_values {
        let reps: Vec<Result<(RepErrors, usize)>> =
            (0..sim.n_rep).into_par_iter().map(|r| run_replicate(sim, n, r)).collect();
        let reps = reps.into_iter().collect::<Result<Vec<_>>>()?;
        redrawn.push((n, reps.iter().map(|r| r.1).sum()));
        let errs: Vec<RepErrors> = reps.into_iter().map(|r| r.0).collect();
        let ls_int: Vec<f64> = errs.iter().map(|e| e[0].0).collect();
        let ls_slope: Vec<f64> = errs.iter().map(|e| e[0].1).collect();
        for (k, est) in [(1, Estimator::Rd), (2, Estimator::Prd)] {
            let int: Vec<f64> = errs.iter().map(|e| e[k].0).collect();
            let slope: Vec<f64> = errs.iter().map(|e| e[k].1).collect();
            let (re_slope, se_slope) = ratio_with_se(&ls_slope, &slope);
            let (re_intercept, se_intercept) = ratio_with_se(&ls_int, &int);
            rows.push(EfficiencyRow {
                n,
                x_dist: sim.x_dist,
                estimator: est,
                re_slope,
                re_intercept,
                se_slope,
                se_intercept,
                n_rep: sim.n_rep,
                mse_ls_slope: mean(&ls_slope),
                mse_ls_intercept: mean(&ls_int),
                mse_slope: mean(&slope),
                mse_intercept: mean(&int),
            });
        }
    }
    Ok(EfficiencyReport {
        rows,
        redrawn,
        error_sigma: sim.error_sigma,
        re_definition: "MSE_LS / MSE_estimator, MSE about the true coefficients (0, 0)".into(),
    })
}

fn run_replicate(sim: &SimConfig, n: usize, rep: usize) -> Result<(RepErrors, usize)> {
    let mut last = None;
    for attempt in 0..MAX_REDRAWS {
        let mut rng = rng::stream(rng::derive_seed(sim.seed, SAMPLE_TAG ^ n as u64, attempt as u64), rep as u64);
        let data = generate_sample(n, sim.x_dist, sim.error_sigma, &mut rng)?;
        match fit_all(&data, &sim.fit_config(n, rep)) {
            Ok(errs) => return Ok((errs, attempt)),
            Err(e) if e.is_numerical() => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(Error::DegenerateScale))
}

fn fit_all(data: &Dataset, config: &FitConfig) -> Result<RepErrors> {
    let sq = |b: &[f64]| (b[0] * b[0], b[1] * b[1]);
    let ls = fit_ls(data)?;
    let rd = fit_rd_simple(data)?;
    let prd = fit_prd(data, config)?;
    Ok([sq(&ls), sq(&rd), sq(&prd.beta)])
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// `mean(a) / mean(b)` and its delta-method standard error.
fn ratio_with_se(a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len() as f64;
    let (ma, mb) = (mean(a), mean(b));
    let r = ma / mb;
    let (mut vaa, mut vbb, mut vab) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        vaa += (x - ma) * (x - ma);
        vbb += (y - mb) * (y - mb);
        vab += (x - ma) * (y - mb);
    }
    let d = n - 1.0;
    let (vaa, vbb, vab) = (vaa / d, vbb / d, vab / d);
    let var = (vaa - 2.0 * r * vab + r * r * vbb) / (mb * mb * n);
    (r, var.max(0.0).sqrt())
}

/// One claimed ordering at one sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingFlag {
    pub n: usize,
    pub x_dist: XDist,
    pub column: String,
    pub prd: f64,
    pub rd: f64,
    /// `prd - rd`.
    pub margin: f64,
    /// `None` when the report has fewer than two replicates.
    pub prd_ahead: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingSummary {
    pub flags: Vec<OrderingFlag>,
    /// PRD slope strictly more efficient than RD slope at every `n`.
    pub slope_prd_over_rd: Option<bool>,
    /// PRD at least as efficient as RD in every column at every `n`.
    pub prd_at_least_rd_everywhere: Option<bool>,
}

/// Compares the PRD and RD rows of `report` column by column.
pub fn efficiency_orderings(report: &EfficiencyReport) -> OrderingSummary {
    let mut flags = Vec::new();
    for prd in report.rows.iter().filter(|r| r.estimator == Estimator::Prd) {
        let Some(rd) = report
            .rows
            .iter()
            .find(|r| r.estimator == Estimator::Rd && r.n == prd.n && r.x_dist == prd.x_dist)
        else {
            continue;
        };
        let defined = prd.n_rep >= 2 && rd.n_rep >= 2;
        for (column, a, b) in [("slope", prd.re_slope, rd.re_slope), ("intercept", prd.re_intercept, rd.re_intercept)]
        {
            flags.push(OrderingFlag {
                n: prd.n,
                x_dist: prd.x_dist,
                column: column.into(),
                prd: a,
                rd: b,
                margin: a - b,
                prd_ahead: defined.then_some(a > b),
            });
        }
    }
    let slope = all_hold(&flags, |f| f.column == "slope", |m| m > 0.0);
    let everywhere = all_hold(&flags, |_| true, |m| m >= 0.0);
    OrderingSummary { flags, slope_prd_over_rd: slope, prd_at_least_rd_everywhere: everywhere }
}

fn all_hold(
    flags: &[OrderingFlag],
    select: impl Fn(&OrderingFlag) -> bool,
    holds: impl Fn(f64) -> bool,
) -> Option<bool> {
    let relevant: Vec<&OrderingFlag> = flags.iter().filter(|f| select(f)).collect();
    if relevant.is_empty() || relevant.iter().any(|f| f.prd_ahead.is_none()) {
        return None;
    }
    Some(relevant.iter().all(|f| holds(f.margin)))
}
