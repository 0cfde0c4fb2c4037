//! The deepest projection-regression fit and its comparators.

mod candidates;
mod config;
mod directions;
mod ls;
mod prd;
mod rdepth;
pub mod simplex;

pub use crate::depth::ObjectiveSpec;
pub use candidates::{exact_fit, generate_candidates};
pub use config::FitConfig;
pub use directions::{generate_directions, STRATEGIC_PERTURBATION};
pub use ls::fit_ls;
pub use prd::{fit_prd, FitResult};
pub use rdepth::{fit_rd_simple, rdepth_simple};
