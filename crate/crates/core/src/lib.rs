//! Projection regression depth (PRD) and its deepest-regression estimator,
//! with comparators (least squares, the deepest regression-depth line) and
//! tools for robustness experiments.
//!
//! ```
//! use prdepth::{fit_prd, Dataset, FitConfig};
//!
//! let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
//! let y = [1.1, 1.9, 3.2, 3.9, 5.1, 40.0];
//! let data = Dataset::simple(&x, &y)?;
//! let fit = fit_prd(&data, &FitConfig::for_sample(data.n(), data.p()).with_seed(7))?;
//! assert!(fit.beta[1] > 0.8 && fit.beta[1] < 1.2);
//! # Ok::<(), prdepth::Error>(())
//! ```

pub mod depth;
pub mod error;
pub mod estimators;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod rng;
pub mod roblab;
pub mod simharness;

pub use depth::{Coefficients, Dataset, Direction, DepthReport, InnerEstimatorSpec, ObjectiveSpec};
pub use error::{Error, Result};
pub use estimators::{fit_ls, fit_prd, fit_rd_simple, rdepth_simple, FitConfig, FitResult};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
