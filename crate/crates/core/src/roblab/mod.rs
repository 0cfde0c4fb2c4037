//! Robustness experiments on finite samples: replacement breakdown,
//! maximum bias under point-mass contamination, finite-difference influence
//! and the two contamination demonstrations.

mod bias;
mod breakdown;
mod demo;
mod influence;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::depth::Dataset;
use crate::error::Result;
use crate::rng::Rng;

pub use bias::{default_leverage_grid, empirical_mb, EmpiricalMB};
pub use breakdown::{rbp_experiment, RbpResult, TILT_SCHEDULE};
pub use demo::{demo_contamination, eight_point_synthetic, DemoFit, DemoReport, PlotLine, PlotPoint, Scenario};
pub use influence::{empirical_if, EmpiricalIF};

/// Scale of the jitter applied to contaminating points.
pub const JITTER: f64 = 1e-6;

/// A point `(y0, x0)` used to contaminate a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContaminationPoint {
    pub y0: f64,
    pub x0: Vec<f64>,
}

impl ContaminationPoint {
    pub fn norm(&self) -> f64 {
        (self.y0 * self.y0 + self.x0.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }
}

/// Independent standard normal `y` and `x` in `R^p`, no intercept, true
/// coefficients zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalModel {
    pub p: usize,
}

impl NormalModel {
    pub fn sample(&self, n: usize, rng: &mut Rng) -> Result<Dataset> {
        let x: Vec<Vec<f64>> =
            (0..n).map(|_| (0..self.p).map(|_| StandardNormal.sample(rng)).collect()).collect();
        let y: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        Dataset::new(y, x, false)
    }
}

/// Copy of `data` with rows `0..m` replaced by jittered copies of `z`.
fn contaminate(data: &Dataset, m: usize, z: &ContaminationPoint, rng: &mut Rng) -> Result<Dataset> {
    let mut out = data.clone();
    for i in 0..m {
        let jy: f64 = StandardNormal.sample(rng);
        let x: Vec<f64> = z
            .x0
            .iter()
            .map(|v| {
                let j: f64 = StandardNormal.sample(rng);
                v + JITTER * j
            })
            .collect();
        out.replace_row(i, z.y0 + JITTER * jy, &x)?;
    }
    Ok(out)
}
