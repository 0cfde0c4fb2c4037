//! Univariate building blocks and the empirical unfitness / projection
//! regression depth functions.

mod dataset;
pub mod stats;
mod unfitness;

pub use dataset::{Coefficients, Dataset, Direction};
pub use stats::{mad, median, pd_n, pwm, pwm_weight};
pub use unfitness::{
    prd, uf, uf_v, DepthReport, InnerEstimatorSpec, ObjectiveSpec, UnfitnessEvaluator,
};
