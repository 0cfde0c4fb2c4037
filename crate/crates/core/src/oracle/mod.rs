//! Population-level quantities under point-mass contamination: quantiles of
//! contaminated medians and MADs, maximum-bias bounds, the influence function
//! and breakdown-point formulas.

mod dist;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dist::DistSpec;

/// Bisection tolerance for quantiles of `|X - c|`.
pub const ABS_QUANTILE_TOL: f64 = 1e-10;

/// `q(eps) = 1 / (2 (1 - eps))` for `eps` in `[0, 1/2)`.
pub fn q_eps(epsilon: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    Ok(0.5 / (1.0 - epsilon))
}

fn middle(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).min(a.min(b).max(c))
}

/// Median of `(1 - eps) F + eps delta_x`: the middle of
/// `F^-1(1 - q)`, `F^-1(q)` and `x`.
pub fn contaminated_median(f: &DistSpec, epsilon: f64, x: f64) -> Result<f64> {
    let q = q_eps(epsilon)?;
    Ok(middle(f.quantile(1.0 - q), f.quantile(q), x))
}

/// Quantile of `|X - c|` at level `prob`, found by bisection on
/// `t -> F(c + t) - F(c - t)`.
pub fn abs_dev_quantile(f: &DistSpec, c: f64, prob: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&prob) {
        return Err(Error::RootFindFailure(format!("level {prob} outside [0, 1)")));
    }
    if prob == 0.0 {
        return Ok(0.0);
    }
    let mass = |t: f64| f.cdf(c + t) - f.cdf(c - t);
    let mut hi = 1.0;
    let mut doublings = 0;
    while mass(hi) < prob {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 || !hi.is_finite() {
            return Err(Error::RootFindFailure(format!("no upper bracket for level {prob}")));
        }
    }
    let mut lo = 0.0;
    for _ in 0..400 {
        if hi - lo <= ABS_QUANTILE_TOL * (1.0 + hi) {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if mass(mid) < prob {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::RootFindFailure(format!("bisection stalled at level {prob}")))
}

/// `m1(X, c, eps)`: the `1 - q(eps)` quantile of `|X - c|`.
pub fn m1(f: &DistSpec, c: f64, epsilon: f64) -> Result<f64> {
    abs_dev_quantile(f, c, 1.0 - q_eps(epsilon)?)
}

/// `m2(X, c, eps)`: the `q(eps)` quantile of `|X - c|`.
pub fn m2(f: &DistSpec, c: f64, epsilon: f64) -> Result<f64> {
    abs_dev_quantile(f, c, q_eps(epsilon)?)
}

/// MAD of `(1 - eps) F + eps delta_x`: the middle of `m1`, `|x - med|` and
/// `m2`, all taken about the contaminated median `med`.
pub fn contaminated_mad(f: &DistSpec, epsilon: f64, x: f64) -> Result<f64> {
    let med = contaminated_median(f, epsilon, x)?;
    Ok(middle(m1(f, med, epsilon)?, (x - med).abs(), m2(f, med, epsilon)?))
}

/// Bounds on the maximum bias of the deepest fit and on the contaminated
/// response scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleBounds {
    pub epsilon: f64,
    pub q_eps: f64,
    /// `J^-1(1 - q)`.
    pub a: f64,
    /// `J^-1(q)`.
    pub b_quantile: f64,
    /// `m1(y, Med(F_y), eps)`.
    pub m1: f64,
    /// `m2(y, Med(F_y), eps)`.
    pub m2: f64,
    /// `J^-1(q)`, the lower bias bound.
    pub b: f64,
    pub mb_lower: f64,
    pub mb_upper: f64,
    /// `m2(y, a1, eps)`, the largest contaminated MAD of `y`.
    pub c_scale: f64,
    /// `m1(y, b1, eps)`, the smallest contaminated MAD of `y`.
    pub d_scale: f64,
    /// `F_|y|^-1(1 - q)`.
    pub a1: f64,
    /// `F_|y|^-1(q)`.
    pub b1: f64,
}

/// Maximum-bias interval `[b, 2b]` with `b = J^-1(q(eps))`, where `j` is the
/// law of `y / x'v`, plus the scale bounds for the response law `y`.
pub fn mb_bounds(j: &DistSpec, y: &DistSpec, epsilon: f64) -> Result<OracleBounds> {
    let q = q_eps(epsilon)?;
    let b = j.quantile(q);
    let y_med = y.quantile(0.5);
    let a1 = abs_dev_quantile(y, 0.0, 1.0 - q)?;
    let b1 = abs_dev_quantile(y, 0.0, q)?;
    Ok(OracleBounds {
        epsilon,
        q_eps: q,
        a: j.quantile(1.0 - q),
        b_quantile: b,
        m1: m1(y, y_med, epsilon)?,
        m2: m2(y, y_med, epsilon)?,
        b,
        mb_lower: b,
        mb_upper: 2.0 * b,
        c_scale: m2(y, a1, epsilon)?,
        d_scale: m1(y, b1, epsilon)?,
        a1,
        b1,
    })
}

/// Influence function of the deepest fit at a point with slope ratio
/// `z0 = y0 / x0_1`, in the orientation where `x0` lies on the first axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IFResult {
    pub z0: f64,
    pub vector: Vec<f64>,
    pub gamma_star: Option<f64>,
}

/// `min{|z0| I(|z0| != 1/2) - 1, 1}`, the location of the contaminated fit
/// along the first axis.
pub fn if_shift(z0: f64) -> f64 {
    let ind = if z0.abs() != 0.5 { 1.0 } else { 0.0 };
    (z0.abs() * ind - 1.0).min(1.0)
}

/// Closed-form influence function for independent centered normal `y` and
/// spherical normal `x` in `R^p`.
///
/// The first coordinate is `s / (2 f(s) F_y^-1(3/4))` with `s = if_shift(z0)`
/// and `f` the density of `y / x_1`; the others are zero. `gamma_star` is
/// the supremum of its absolute value over a `z0` grid.
pub fn influence_function(z0: f64, y: &DistSpec, x: &DistSpec, p: usize) -> Result<IFResult> {
    if p == 0 {
        return Err(Error::InvalidInput("p must be positive".into()));
    }
    let ratio = DistSpec::ratio_of_normals(y, x)?;
    let q3 = y.quantile(0.75);
    if q3.is_nan() || q3 <= 0.0 {
        return Err(Error::InvalidInput("F_y^-1(3/4) must be positive".into()));
    }
    let first = |z: f64| {
        let s = if_shift(z);
        s / (2.0 * ratio.density(s) * q3)
    };
    let mut vector = vec![0.0; p];
    vector[0] = first(z0);
    let gamma = if_grid().map(|z| first(z).abs()).fold(0.0, f64::max);
    Ok(IFResult { z0, vector, gamma_star: Some(gamma) })
}

/// Symmetric `z0` grid: a fine linear part on `[-20, 20]` and a geometric
/// tail out to `1e6`.
fn if_grid() -> impl Iterator<Item = f64> {
    let linear = (-4000..=4000).map(|k| k as f64 * 0.005);
    let tail = (0..=60).flat_map(|k| {
        let z = 20.0 * 10f64.powf(k as f64 * 0.05);
        [z, -z]
    });
    linear.chain(tail)
}

/// An exact fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: usize,
    pub den: usize,
}

impl Fraction {
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Replacement breakdown point of the deepest fit for `n` points in general
/// position: `floor((n+1)/2)/n` when `p = 1`, else `(floor(n/2) - p + 2)/n`.
pub fn rbp_formula(n: usize, p: usize) -> Result<Fraction> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidInput("n and p must be positive".into()));
    }
    if p >= n / 2 + 2 {
        return Err(Error::DimensionTooLarge { n, p });
    }
    let num = if p == 1 { n.div_ceil(2) } else { n / 2 + 2 - p };
    Ok(Fraction { num, den: n })
}

/// Asymptotic breakdown points of the three fits compared throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbpValues {
    pub prd: f64,
    pub rd: f64,
    pub ls: f64,
}

pub fn abp_values() -> AbpValues {
    AbpValues { prd: 0.5, rd: 1.0 / 3.0, ls: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_values() {
        assert_eq!(q_eps(0.0).unwrap(), 0.5);
        assert!((q_eps(1.0 / 3.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((q_eps(0.49).unwrap() - 1.0 / 1.02).abs() < 1e-15);
        assert!(q_eps(0.5).is_err() && q_eps(-0.1).is_err());
    }

    #[test]
    fn contaminated_median_cases() {
        let n = DistSpec::standard_normal();
        assert!(contaminated_median(&n, 0.0, 7.0).unwrap().abs() < 1e-12);
        let m = contaminated_median(&n, 0.2, 5.0).unwrap();
        // probit(0.625) from an independent implementation
        assert!((m - 0.31863936396437514).abs() < 1e-10);
        assert_eq!(contaminated_median(&n, 0.2, 0.1).unwrap(), 0.1);
    }

    #[test]
    fn contaminated_mad_cases() {
        let n = DistSpec::standard_normal();
        let mad0 = n.quantile(0.75);
        for x in [-3.0, 0.0, 2.0] {
            assert!((contaminated_mad(&n, 0.0, x).unwrap() - mad0).abs() < 1e-9);
        }
        let med = contaminated_median(&n, 0.1, 0.0).unwrap();
        let v = contaminated_mad(&n, 0.1, 0.0).unwrap();
        assert!(v >= m1(&n, med, 0.1).unwrap() - 1e-12 && v <= m2(&n, med, 0.1).unwrap() + 1e-12);
    }

    #[test]
    fn cauchy_bias_bounds() {
        let j = DistSpec::ratio_of_normals(&DistSpec::standard_normal(), &DistSpec::standard_normal()).unwrap();
        let b = mb_bounds(&j, &DistSpec::standard_normal(), 1.0 / 3.0).unwrap();
        assert!((b.b - 1.0).abs() < 1e-12);
        assert_eq!(b.mb_upper, 2.0 * b.mb_lower);
        assert!(b.a <= b.b_quantile && b.d_scale <= b.c_scale);
        let mut prev = 0.0;
        for eps in [1e-6, 0.05, 0.1, 0.2, 0.3, 0.4, 0.49] {
            let b = mb_bounds(&j, &DistSpec::standard_normal(), eps).unwrap().b;
            assert!(b >= prev);
            prev = b;
        }
        assert!(mb_bounds(&j, &DistSpec::standard_normal(), 1e-9).unwrap().b < 1e-8);
    }

    #[test]
    fn influence_far_point() {
        let n = DistSpec::standard_normal();
        let r = influence_function(1e4, &n, &n, 3).unwrap();
        let expected = std::f64::consts::PI / 0.6744897501960817;
        assert!((r.vector[0] - expected).abs() < 1e-9);
        assert_eq!(&r.vector[1..], &[0.0, 0.0]);
        let g = r.gamma_star.unwrap();
        assert!(g.is_finite() && (g - expected).abs() < 1e-9);
        let t = DistSpec::student_t(3.0).unwrap();
        assert_eq!(influence_function(1.0, &t, &n, 2), Err(Error::UnsupportedDistPair));
    }

    #[test]
    fn rbp_values() {
        assert_eq!(rbp_formula(8, 2).unwrap(), Fraction { num: 4, den: 8 });
        assert_eq!(rbp_formula(9, 1).unwrap(), Fraction { num: 5, den: 9 });
        assert_eq!(rbp_formula(10, 3).unwrap().value(), 0.4);
        assert_eq!(rbp_formula(4, 4), Err(Error::DimensionTooLarge { n: 4, p: 4 }));
        let a = abp_values();
        assert_eq!((a.prd, a.ls), (0.5, 0.0));
        assert!((a.rd - 1.0 / 3.0).abs() < 1e-16);
    }
}
