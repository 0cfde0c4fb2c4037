use serde::{Deserialize, Serialize};

use crate::depth::{InnerEstimatorSpec, ObjectiveSpec};
use crate::error::{Error, Result};
use crate::linalg::binomial;

/// Tuning of the approximate deepest-fit algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Number of exact-fit candidates per replicate.
    pub n_beta: usize,
    /// Number of projection directions per replicate.
    pub n_dir: usize,
    /// Independent replicates; the deepest result wins.
    pub replications: usize,
    pub seed: u64,
    pub refine_max_iter: usize,
    pub refine_tol: f64,
    pub inner: InnerEstimatorSpec,
    pub objective: ObjectiveSpec,
}

impl FitConfig {
    /// Largest candidate count used by [`FitConfig::for_sample`].
    pub const MAX_DEFAULT_N_BETA: usize = 5000;

    /// Defaults for a sample of `n` rows and `p` coefficients: `100 + 2n`
    /// directions and every `p`-subset as a candidate, capped at
    /// [`MAX_DEFAULT_N_BETA`](Self::MAX_DEFAULT_N_BETA) and at `n(n-1)/2`.
    pub fn for_sample(n: usize, p: usize) -> Self {
        let pairs = (n * n.saturating_sub(1) / 2).max(1);
        let n_beta = binomial(n, p).min(pairs).min(Self::MAX_DEFAULT_N_BETA).max(p + 1);
        Self {
            n_beta,
            n_dir: 100 + 2 * n,
            replications: 1,
            seed: 0,
            refine_max_iter: 500,
            refine_tol: 1e-8,
            inner: InnerEstimatorSpec::Median,
            objective: ObjectiveSpec::AbsOfMedian,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_inner(mut self, inner: InnerEstimatorSpec) -> Self {
        self.inner = inner;
        self
    }

    pub fn with_objective(mut self, objective: ObjectiveSpec) -> Self {
        self.objective = objective;
        self
    }

    pub fn validate(&self, n: usize, p: usize) -> Result<()> {
        if self.n_beta < p + 1 {
            return Err(Error::InvalidInput(format!("n_beta = {} must be at least p + 1 = {}", self.n_beta, p + 1)));
        }
        if self.n_dir == 0 {
            return Err(Error::InvalidInput("n_dir must be positive".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidInput("replications must be positive".into()));
        }
        if self.refine_max_iter == 0 {
            return Err(Error::InvalidInput("refine_max_iter must be positive".into()));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol.is_finite()) {
            return Err(Error::InvalidInput("refine_tol must be a positive finite number".into()));
        }
        self.inner.validate()?;
        self.objective.validate(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_defaults() {
        let c = FitConfig::for_sample(100, 2);
        assert_eq!(c.n_dir, 300);
        assert_eq!(c.n_beta, 4950);
        let c = FitConfig::for_sample(8, 2);
        assert_eq!(c.n_beta, 28);
        assert!(c.validate(8, 2).is_ok());
        let c = FitConfig::for_sample(2, 2);
        assert_eq!(c.n_beta, 3);
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = FitConfig::for_sample(10, 2);
        c.n_beta = 2;
        assert!(c.validate(10, 2).is_err());
        let mut c = FitConfig::for_sample(10, 2);
        c.refine_tol = 0.0;
        assert!(c.validate(10, 2).is_err());
        let c = FitConfig::for_sample(10, 2).with_objective(ObjectiveSpec::HthOrderAbs { h: 11 });
        assert!(c.validate(10, 2).is_err());
    }
}
