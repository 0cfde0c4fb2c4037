use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Cauchy, Continuous, ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

/// A continuous univariate model distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistSpec {
    Normal { mu: f64, sigma: f64 },
    StudentT { nu: f64 },
    Cauchy { loc: f64, scale: f64 },
}

impl DistSpec {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Self::Normal { mu, sigma }.validated()
    }

    pub fn standard_normal() -> Self {
        Self::Normal { mu: 0.0, sigma: 1.0 }
    }

    pub fn student_t(nu: f64) -> Result<Self> {
        Self::StudentT { nu }.validated()
    }

    pub fn cauchy(loc: f64, scale: f64) -> Result<Self> {
        Self::Cauchy { loc, scale }.validated()
    }

    /// Distribution of `y / x` for independent centered normals `y` and `x`:
    /// a Cauchy law with scale `sigma_y / sigma_x`.
    pub fn ratio_of_normals(y: &DistSpec, x: &DistSpec) -> Result<Self> {
        match (*y, *x) {
            (Self::Normal { mu: 0.0, sigma: sy }, Self::Normal { mu: 0.0, sigma: sx }) => {
                Self::cauchy(0.0, sy / sx)
            }
            _ => Err(Error::UnsupportedDistPair),
        }
    }

    fn validated(self) -> Result<Self> {
        let ok = match self {
            Self::Normal { mu, sigma } => mu.is_finite() && sigma > 0.0 && sigma.is_finite(),
            Self::StudentT { nu } => nu > 0.0 && nu.is_finite(),
            Self::Cauchy { loc, scale } => loc.is_finite() && scale > 0.0 && scale.is_finite(),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidInput(format!("invalid distribution parameters {self:?}")))
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Normal { mu, sigma } => normal(mu, sigma).map_or(f64::NAN, |d| d.cdf(x)),
            Self::StudentT { nu } => student(nu).map_or(f64::NAN, |d| d.cdf(x)),
            Self::Cauchy { loc, scale } => 0.5 + ((x - loc) / scale).atan() / PI,
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match *self {
            Self::Normal { mu, sigma } => normal(mu, sigma).map_or(f64::NAN, |d| d.pdf(x)),
            Self::StudentT { nu } => student(nu).map_or(f64::NAN, |d| d.pdf(x)),
            Self::Cauchy { loc, scale } => {
                let z = (x - loc) / scale;
                1.0 / (PI * scale * (1.0 + z * z))
            }
        }
    }

    /// Inverse cdf for `prob` in `[0, 1]` (infinite at the end points).
    pub fn quantile(&self, prob: f64) -> f64 {
        match *self {
            Self::Normal { mu, sigma } => normal(mu, sigma).map_or(f64::NAN, |d| d.inverse_cdf(prob)),
            Self::StudentT { nu } => student(nu).map_or(f64::NAN, |d| d.inverse_cdf(prob)),
            Self::Cauchy { loc, scale } => {
                if prob <= 0.0 {
                    f64::NEG_INFINITY
                } else if prob >= 1.0 {
                    f64::INFINITY
                } else {
                    Cauchy::new(loc, scale).map_or(f64::NAN, |c| c.inverse_cdf(prob))
                }
            }
        }
    }

    /// Draws one variate.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        use rand_distr::{Distribution, StandardNormal, StudentT};
        match *self {
            Self::Normal { mu, sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                mu + sigma * z
            }
            Self::StudentT { nu } => StudentT::new(nu).map_or(f64::NAN, |t| t.sample(rng)),
            Self::Cauchy { loc, scale } => {
                let u: f64 = rng.random_range(0.0..1.0);
                loc + scale * (PI * (u - 0.5)).tan()
            }
        }
    }
}

// Invalid parameters (only reachable through enum literals) give NaN.
fn normal(mu: f64, sigma: f64) -> Option<Normal> {
    Normal::new(mu, sigma).ok()
}

fn student(nu: f64) -> Option<StudentsT> {
    StudentsT::new(0.0, 1.0, nu).ok()
}
