use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// A regression sample `(y_i, x_i)` together with its design rows `w_i`.
///
/// With an intercept the design row is `w_i = (1, x_i')`, so `p = dim(x) + 1`;
/// otherwise `w_i = x_i` and `p = dim(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: Vec<f64>,
    /// Row-major `n x p` design matrix.
    design: Vec<f64>,
    p: usize,
    with_intercept: bool,
}

impl Dataset {
    /// Builds a dataset from responses and raw predictor rows.
    pub fn new(y: Vec<f64>, x: Vec<Vec<f64>>, with_intercept: bool) -> Result<Self> {
        if y.len() != x.len() {
            return Err(Error::InvalidInput(format!(
                "{} responses but {} predictor rows",
                y.len(),
                x.len()
            )));
        }
        let q = x.first().map_or(0, Vec::len);
        if x.iter().any(|row| row.len() != q) {
            return Err(Error::InvalidInput("ragged predictor rows".into()));
        }
        let p = q + usize::from(with_intercept);
        let mut design = Vec::with_capacity(y.len() * p);
        for row in &x {
            if with_intercept {
                design.push(1.0);
            }
            design.extend_from_slice(row);
        }
        Self::from_design(y, design, p, with_intercept)
    }

    /// Simple regression `y = b0 + b1 x`.
    pub fn simple(x: &[f64], y: &[f64]) -> Result<Self> {
        Self::new(y.to_vec(), x.iter().map(|&v| vec![v]).collect(), true)
    }

    fn from_design(y: Vec<f64>, design: Vec<f64>, p: usize, with_intercept: bool) -> Result<Self> {
        let n = y.len();
        if p == 0 {
            return Err(Error::InvalidInput("coefficient dimension p must be positive".into()));
        }
        if n < p {
            return Err(Error::InvalidInput(format!("need n >= p, got n = {n}, p = {p}")));
        }
        if y.iter().chain(design.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite value in dataset".into()));
        }
        Ok(Self { y, design, p, with_intercept })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn with_intercept(&self) -> bool {
        self.with_intercept
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Design row `w_i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.design[i * self.p..(i + 1) * self.p]
    }

    /// Raw predictors `x_i` (the design row without the intercept column).
    pub fn x(&self, i: usize) -> &[f64] {
        let row = self.row(i);
        if self.with_intercept {
            &row[1..]
        } else {
            row
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.design.chunks_exact(self.p)
    }

    pub fn fitted(&self, i: usize, beta: &[f64]) -> f64 {
        linalg::dot(self.row(i), beta)
    }

    pub fn residual(&self, i: usize, beta: &[f64]) -> f64 {
        self.y[i] - self.fitted(i, beta)
    }

    /// Threshold below which `|w_i'v|` counts as zero: `1e-12 (1 + max_i ||w_i||)`.
    pub fn denominator_tolerance(&self) -> f64 {
        let max_norm = self.rows().map(linalg::norm).fold(0.0, f64::max);
        1e-12 * (1.0 + max_norm)
    }

    /// Same design, new responses.
    pub fn with_response(&self, y: Vec<f64>) -> Result<Self> {
        if y.len() != self.n() {
            return Err(Error::InvalidInput("response length mismatch".into()));
        }
        Self::from_design(y, self.design.clone(), self.p, self.with_intercept)
    }

    /// `(y + W b, W)`.
    pub fn shifted(&self, b: &[f64]) -> Result<Self> {
        let y = (0..self.n()).map(|i| self.y[i] + self.fitted(i, b)).collect();
        self.with_response(y)
    }

    /// `(s y, W)`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        self.with_response(self.y.iter().map(|v| s * v).collect())
    }

    /// `(y, W A)` for a `p x p` row-major matrix `A`. The result has no
    /// intercept flag: transformed rows need not start with 1.
    pub fn transformed(&self, a: &[f64]) -> Result<Self> {
        let p = self.p;
        if a.len() != p * p {
            return Err(Error::InvalidInput("transform must be p x p".into()));
        }
        let mut design = Vec::with_capacity(self.design.len());
        for row in self.rows() {
            for j in 0..p {
                design.push((0..p).map(|k| row[k] * a[k * p + j]).sum());
            }
        }
        Self::from_design(self.y.clone(), design, p, false)
    }

    /// Replaces row `i` by `(y, x)`.
    pub fn replace_row(&mut self, i: usize, y: f64, x: &[f64]) -> Result<()> {
        let q = self.p - usize::from(self.with_intercept);
        if x.len() != q {
            return Err(Error::InvalidInput("replacement row has wrong length".into()));
        }
        if !y.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite replacement row".into()));
        }
        self.y[i] = y;
        let start = i * self.p + usize::from(self.with_intercept);
        self.design[start..start + q].copy_from_slice(x);
        Ok(())
    }

    /// Every `p x p` submatrix of distinct design rows is nonsingular.
    ///
    /// Enumerates all `C(n, p)` subsets, so only use it on small samples.
    pub fn is_general_position(&self) -> bool {
        let p = self.p;
        let mut idx: Vec<usize> = (0..p).collect();
        let n = self.n();
        loop {
            let mut a: Vec<f64> = idx.iter().flat_map(|&i| self.row(i).iter().copied()).collect();
            let mut b = vec![0.0; p];
            if linalg::solve_in_place(&mut a, &mut b, p).is_none() {
                return false;
            }
            if !linalg::next_combination(&mut idx, n) {
                return true;
            }
        }
    }
}

/// A coefficient vector `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coefficients(Vec<f64>);

impl Coefficients {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        Ok(Self(beta))
    }

    pub fn zeros(p: usize) -> Self {
        Self(vec![0.0; p])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.0)
    }

    /// Euclidean distance to another coefficient vector.
    pub fn distance(&self, other: &Coefficients) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

impl Deref for Coefficients {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Coefficients {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:.8}")?;
        }
        write!(f, ")")
    }
}

/// A unit vector in `R^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalizes `v`; fails on a zero or non-finite vector.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        let norm = linalg::norm(&v);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidInput("direction must be a nonzero finite vector".into()));
        }
        Ok(Self(v.into_iter().map(|c| c / norm).collect()))
    }
}

impl Deref for Direction {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}
