use nalgebra::{DMatrix, DVector};

use crate::depth::{Coefficients, Dataset};
use crate::error::{Error, Result};

/// Ordinary least squares via a Householder QR factorization.
pub fn fit_ls(data: &Dataset) -> Result<Coefficients> {
    let (n, p) = (data.n(), data.p());
    let w = DMatrix::from_fn(n, p, |i, j| data.row(i)[j]);
    let y = DVector::from_column_slice(data.y());
    let qr = w.qr();
    let r = qr.r();
    let diag_max = (0..p).map(|j| r[(j, j)].abs()).fold(0.0, f64::max);
    if diag_max == 0.0 || (0..p).any(|j| r[(j, j)].abs() <= 1e-10 * diag_max) {
        return Err(Error::RankDeficient);
    }
    let qty = qr.q().transpose() * y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or(Error::RankDeficient)?;
    Coefficients::new(beta.iter().copied().collect())
}
