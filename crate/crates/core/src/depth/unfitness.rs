//! Unfitness of a coefficient vector along one direction and over a
//! direction set, and the resulting projection regression depth.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::stats::{mad_about, median_in_place, weighted_by_depth};
use super::{Coefficients, Dataset, Direction};
use crate::error::{Error, Result};
use crate::linalg;

/// Univariate location estimator applied to the projected residual ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InnerEstimatorSpec {
    #[default]
    Median,
    Pwm { k: f64, c: f64 },
}

impl InnerEstimatorSpec {
    pub const DEFAULT_PWM_K: f64 = 3.0;
    pub const DEFAULT_PWM_C: f64 = 3.5;

    pub fn pwm(k: f64, c: f64) -> Result<Self> {
        let spec = Self::Pwm { k, c };
        spec.validate()?;
        Ok(spec)
    }

    pub fn default_pwm() -> Self {
        Self::Pwm { k: Self::DEFAULT_PWM_K, c: Self::DEFAULT_PWM_C }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Median => Ok(()),
            Self::Pwm { k, c } if k > 0.0 && c > 0.0 && k.is_finite() && c.is_finite() => Ok(()),
            Self::Pwm { k, c } => Err(Error::InvalidInput(format!(
                "PWM needs finite k > 0 and c > 0 (got k = {k}, c = {c})"
            ))),
        }
    }

    /// Evaluates the estimator; `buf` is used as scratch and left reordered.
    ///
    /// For PWM, a sample whose MAD is zero has more than half of its mass at
    /// the median, and the median is returned.
    pub(crate) fn apply(&self, buf: &mut [f64]) -> Result<f64> {
        match *self {
            Self::Median => median_in_place(buf),
            Self::Pwm { k, c } => {
                let med = median_in_place(buf)?;
                let mut dev = buf.to_vec();
                let scale = mad_about(&mut dev, med);
                if scale <= 0.0 {
                    return Ok(med);
                }
                weighted_by_depth(buf, med, scale, k, c)
            }
        }
    }
}

impl fmt::Display for InnerEstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Median => write!(f, "median"),
            Self::Pwm { k, c } => write!(f, "pwm(k={k}, c={c})"),
        }
    }
}

/// How the projected residual ratios along one direction are turned into a
/// nonnegative number before scaling by `MAD(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveSpec {
    /// `|T(ratios)|` with `T` the inner estimator.
    #[default]
    AbsOfMedian,
    /// `Med(|ratios|)`.
    MedianOfAbs,
    /// The `h`-th smallest `|ratio|`.
    HthOrderAbs { h: usize },
    /// Sum of the `h` smallest `|ratio|`.
    SumSmallestAbs { h: usize },
}

impl ObjectiveSpec {
    /// `floor(n/2) + 1`.
    pub fn order_low(n: usize) -> usize {
        n / 2 + 1
    }

    /// `floor(n/2) + floor((p+1)/2)`.
    pub fn order_high(n: usize, p: usize) -> usize {
        n / 2 + p.div_ceil(2)
    }

    /// Parses the [`Display`](fmt::Display) forms plus the shorthands
    /// `t1` (median of absolute ratios), `t2` and `t3` (the `h`-th smallest
    /// absolute ratio with `h` = [`order_low`](Self::order_low) and
    /// [`order_high`](Self::order_high)), and `hth-order:low|high`,
    /// `sum-smallest:low|high`.
    pub fn parse_for(s: &str, n: usize, p: usize) -> Result<Self> {
        let s = s.trim();
        let order = |h: &str| match h.trim() {
            "low" => Some(Self::order_low(n)),
            "high" => Some(Self::order_high(n, p)),
            _ => None,
        };
        if let Some((kind, h)) = s.split_once(':') {
            match (kind, order(h)) {
                ("hth-order", Some(h)) => return Ok(Self::HthOrderAbs { h }),
                ("sum-smallest", Some(h)) => return Ok(Self::SumSmallestAbs { h }),
                _ => {}
            }
        }
        match s {
            "t1" => Ok(Self::MedianOfAbs),
            "t2" => Ok(Self::HthOrderAbs { h: Self::order_low(n) }),
            "t3" => Ok(Self::HthOrderAbs { h: Self::order_high(n, p) }),
            _ => s.parse(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Self::HthOrderAbs { h } | Self::SumSmallestAbs { h } if h == 0 || h > n => Err(
                Error::InvalidInput(format!("objective order h = {h} must lie in 1..={n}")),
            ),
            _ => Ok(()),
        }
    }

    /// Whether the inner estimator takes part in this objective.
    pub fn uses_inner(&self) -> bool {
        matches!(self, Self::AbsOfMedian)
    }

    fn apply(&self, inner: &InnerEstimatorSpec, buf: &mut [f64]) -> Result<f64> {
        match *self {
            Self::AbsOfMedian => Ok(inner.apply(buf)?.abs()),
            Self::MedianOfAbs => {
                abs_all(buf);
                median_in_place(buf)
            }
            Self::HthOrderAbs { h } => {
                abs_all(buf);
                let idx = h.clamp(1, buf.len()) - 1;
                Ok(*buf.select_nth_unstable_by(idx, f64::total_cmp).1)
            }
            Self::SumSmallestAbs { h } => {
                abs_all(buf);
                let h = h.clamp(1, buf.len());
                if h < buf.len() {
                    buf.select_nth_unstable_by(h - 1, f64::total_cmp);
                }
                Ok(buf[..h].iter().sum())
            }
        }
    }
}

fn abs_all(buf: &mut [f64]) {
    buf.iter_mut().for_each(|v| *v = v.abs());
}

impl fmt::Display for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AbsOfMedian => write!(f, "abs-of-median"),
            Self::MedianOfAbs => write!(f, "median-of-abs"),
            Self::HthOrderAbs { h } => write!(f, "hth-order:{h}"),
            Self::SumSmallestAbs { h } => write!(f, "sum-smallest:{h}"),
        }
    }
}

impl FromStr for ObjectiveSpec {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) forms.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_h = |h: &str| {
            h.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad objective order '{h}'")))
        };
        match s.split_once(':') {
            None if s == "abs-of-median" => Ok(Self::AbsOfMedian),
            None if s == "median-of-abs" => Ok(Self::MedianOfAbs),
            Some(("hth-order", h)) => Ok(Self::HthOrderAbs { h: parse_h(h)? }),
            Some(("sum-smallest", h)) => Ok(Self::SumSmallestAbs { h: parse_h(h)? }),
            _ => Err(Error::InvalidInput(format!(
                "unknown objective '{s}' (expected abs-of-median, median-of-abs, hth-order:H, sum-smallest:H)"
            ))),
        }
    }
}

/// Depth of one coefficient vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthReport {
    pub beta: Coefficients,
    pub uf: f64,
    pub prd: f64,
    pub n_directions_used: usize,
}

impl DepthReport {
    pub fn new(beta: Coefficients, uf: f64, n_directions_used: usize) -> Self {
        Self { beta, uf, prd: 1.0 / (1.0 + uf), n_directions_used }
    }
}

/// Unfitness of `beta` along `v` with the absolute-value-of-`T` objective.
pub fn uf_v(beta: &[f64], v: &Direction, data: &Dataset, inner: &InnerEstimatorSpec) -> Result<f64> {
    let ev = UnfitnessEvaluator::new(data, std::slice::from_ref(v), *inner, ObjectiveSpec::AbsOfMedian)
        .map_err(|e| match e {
            Error::AllDirectionsDegenerate => Error::NoValidResiduals,
            e => e,
        })?;
    ev.uf(beta)
}

/// Maximum of [`uf_v`] over `directions`, skipping directions along which no
/// observation has a nonzero projection.
pub fn uf(beta: &[f64], data: &Dataset, directions: &[Direction], inner: &InnerEstimatorSpec) -> Result<f64> {
    UnfitnessEvaluator::new(data, directions, *inner, ObjectiveSpec::AbsOfMedian)?.uf(beta)
}

/// Projection regression depth `1 / (1 + uf)`.
pub fn prd(
    beta: &[f64],
    data: &Dataset,
    directions: &[Direction],
    inner: &InnerEstimatorSpec,
) -> Result<DepthReport> {
    UnfitnessEvaluator::new(data, directions, *inner, ObjectiveSpec::AbsOfMedian)?.report(beta)
}

struct Projection {
    /// Indices `i` with `|w_i'v|` above the tolerance.
    idx: Vec<usize>,
    /// The matching denominators `w_i'v`.
    den: Vec<f64>,
}

/// Unfitness over a frozen direction set, with the per-direction
/// projections and `MAD(y)` computed once.
pub struct UnfitnessEvaluator<'a> {
    data: &'a Dataset,
    projections: Vec<Projection>,
    scale: f64,
    inner: InnerEstimatorSpec,
    objective: ObjectiveSpec,
}

impl<'a> UnfitnessEvaluator<'a> {
    pub fn new(
        data: &'a Dataset,
        directions: &[Direction],
        inner: InnerEstimatorSpec,
        objective: ObjectiveSpec,
    ) -> Result<Self> {
        inner.validate()?;
        objective.validate(data.n())?;
        if directions.is_empty() {
            return Err(Error::InvalidInput("direction set is empty".into()));
        }
        if let Some(v) = directions.iter().find(|v| v.len() != data.p()) {
            return Err(Error::InvalidInput(format!(
                "direction of length {} for p = {}",
                v.len(),
                data.p()
            )));
        }
        let mut buf = data.y().to_vec();
        let med = median_in_place(&mut buf)?;
        let scale = mad_about(&mut buf, med);
        if scale <= 0.0 {
            return Err(Error::DegenerateScale);
        }
        let tol = data.denominator_tolerance();
        let projections: Vec<Projection> = directions
            .iter()
            .map(|v| {
                let mut idx = Vec::new();
                let mut den = Vec::new();
                for (i, w) in data.rows().enumerate() {
                    let d = linalg::dot(w, v);
                    if d.abs() > tol {
                        idx.push(i);
                        den.push(d);
                    }
                }
                Projection { idx, den }
            })
            .filter(|pr| !pr.idx.is_empty())
            .collect();
        if projections.is_empty() {
            return Err(Error::AllDirectionsDegenerate);
        }
        Ok(Self { data, projections, scale, inner, objective })
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    /// Directions that contribute (at least one valid residual).
    pub fn n_directions_used(&self) -> usize {
        self.projections.len()
    }

    /// `MAD(y)`, the common denominator.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn uf(&self, beta: &[f64]) -> Result<f64> {
        self.uf_until(beta, f64::INFINITY)
    }

    /// Like [`uf`](Self::uf) but returns as soon as the running maximum
    /// exceeds `cutoff`; the returned value is then a lower bound on the
    /// unfitness that is already greater than `cutoff`.
    pub fn uf_until(&self, beta: &[f64], cutoff: f64) -> Result<f64> {
        if beta.len() != self.data.p() {
            return Err(Error::InvalidInput(format!(
                "beta has length {}, expected {}",
                beta.len(),
                self.data.p()
            )));
        }
        let resid: Vec<f64> = (0..self.data.n()).map(|i| self.data.residual(i, beta)).collect();
        let mut buf = Vec::with_capacity(self.data.n());
        let mut worst = 0.0_f64;
        for pr in &self.projections {
            buf.clear();
            buf.extend(pr.idx.iter().zip(&pr.den).map(|(&i, &d)| resid[i] / d));
            let t = self.objective.apply(&self.inner, &mut buf)? / self.scale;
            if t > worst {
                worst = t;
                if worst > cutoff {
                    break;
                }
            }
        }
        Ok(worst)
    }

    pub fn prd(&self, beta: &[f64]) -> Result<f64> {
        Ok(1.0 / (1.0 + self.uf(beta)?))
    }

    pub fn report(&self, beta: &[f64]) -> Result<DepthReport> {
        let uf = self.uf(beta)?;
        Ok(DepthReport::new(Coefficients::new(beta.to_vec())?, uf, self.n_directions_used()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_points() -> Dataset {
        Dataset::simple(&[1.0, 2.0, 3.0], &[0.0, 1.0, 4.0]).unwrap()
    }

    #[test]
    fn worked_example_direction() {
        // residuals (-1, -1, 1), denominators all 1, MAD(y) = 1
        let d = three_points();
        let v = Direction::new(vec![1.0, 0.0]).unwrap();
        let u = uf_v(&[0.0, 1.0], &v, &d, &InnerEstimatorSpec::Median).unwrap();
        assert_eq!(u, 1.0);
    }

    #[test]
    fn exact_fit_is_deepest() {
        let d = Dataset::simple(&[1.0, 2.0, 3.0, 5.0], &[3.0, 5.0, 7.0, 11.0]).unwrap();
        let dirs: Vec<Direction> =
            (0..20).map(|k| Direction::new(vec![(k as f64).cos(), (k as f64).sin()]).unwrap()).collect();
        let r = prd(&[1.0, 2.0], &d, &dirs, &InnerEstimatorSpec::Median).unwrap();
        assert_eq!(r.uf, 0.0);
        assert_eq!(r.prd, 1.0);
        let r = prd(&[1.0, 2.0], &d, &dirs, &InnerEstimatorSpec::default_pwm()).unwrap();
        assert_eq!(r.prd, 1.0);
    }

    #[test]
    fn degenerate_directions_are_skipped() {
        let d = Dataset::new(vec![0.0, 1.0, 3.0], vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![3.0, 0.0]], false)
            .unwrap();
        let bad = Direction::new(vec![0.0, 1.0]).unwrap();
        let good = Direction::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(uf_v(&[0.0, 0.0], &bad, &d, &InnerEstimatorSpec::Median), Err(Error::NoValidResiduals));
        assert_eq!(
            uf(&[0.0, 0.0], &d, std::slice::from_ref(&bad), &InnerEstimatorSpec::Median),
            Err(Error::AllDirectionsDegenerate)
        );
        let both = uf(&[0.0, 0.0], &d, &[bad, good.clone()], &InnerEstimatorSpec::Median).unwrap();
        let one = uf_v(&[0.0, 0.0], &good, &d, &InnerEstimatorSpec::Median).unwrap();
        assert_eq!(both, one);
    }

    #[test]
    fn degenerate_response_scale() {
        let d = Dataset::simple(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap();
        let v = Direction::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(uf_v(&[0.0, 0.0], &v, &d, &InnerEstimatorSpec::Median), Err(Error::DegenerateScale));
    }

    #[test]
    fn early_exit_bounds() {
        let d = three_points();
        let dirs: Vec<Direction> =
            (0..8).map(|k| Direction::new(vec![(k as f64).cos(), (k as f64).sin()]).unwrap()).collect();
        let ev = UnfitnessEvaluator::new(&d, &dirs, InnerEstimatorSpec::Median, ObjectiveSpec::AbsOfMedian)
            .unwrap();
        let full = ev.uf(&[5.0, -3.0]).unwrap();
        let partial = ev.uf_until(&[5.0, -3.0], 0.1).unwrap();
        assert!(partial > 0.1 && partial <= full);
    }

    #[test]
    fn objective_variants() {
        let inner = InnerEstimatorSpec::Median;
        let mut b = vec![-3.0, 1.0, 2.0, -0.5, 4.0];
        assert_eq!(ObjectiveSpec::AbsOfMedian.apply(&inner, &mut b.clone()).unwrap(), 1.0);
        assert_eq!(ObjectiveSpec::MedianOfAbs.apply(&inner, &mut b.clone()).unwrap(), 2.0);
        assert_eq!(ObjectiveSpec::HthOrderAbs { h: 4 }.apply(&inner, &mut b.clone()).unwrap(), 3.0);
        assert_eq!(ObjectiveSpec::SumSmallestAbs { h: 3 }.apply(&inner, &mut b).unwrap(), 3.5);
        assert_eq!(ObjectiveSpec::parse_for("t2", 8, 2).unwrap(), ObjectiveSpec::HthOrderAbs { h: 5 });
        assert_eq!(ObjectiveSpec::parse_for("t3", 10, 3).unwrap(), ObjectiveSpec::HthOrderAbs { h: 7 });
        assert_eq!(ObjectiveSpec::parse_for("t1", 10, 3).unwrap(), ObjectiveSpec::MedianOfAbs);
        assert_eq!(
            ObjectiveSpec::parse_for("sum-smallest:high", 10, 3).unwrap(),
            ObjectiveSpec::SumSmallestAbs { h: 7 }
        );
        assert_eq!(ObjectiveSpec::parse_for("hth-order:4", 10, 3).unwrap(), ObjectiveSpec::HthOrderAbs { h: 4 });
        assert!(ObjectiveSpec::parse_for("hth-order:mid", 10, 3).is_err());
        assert!(ObjectiveSpec::HthOrderAbs { h: 0 }.validate(5).is_err());
        for o in [
            ObjectiveSpec::AbsOfMedian,
            ObjectiveSpec::MedianOfAbs,
            ObjectiveSpec::HthOrderAbs { h: 3 },
            ObjectiveSpec::SumSmallestAbs { h: 2 },
        ] {
            assert_eq!(o.to_string().parse::<ObjectiveSpec>().unwrap(), o);
        }
    }

    #[test]
    fn pwm_inner_zero_mad_falls_back_to_median() {
        let mut b = vec![1.0, 1.0, 1.0, 7.0];
        assert_eq!(InnerEstimatorSpec::default_pwm().apply(&mut b).unwrap(), 1.0);
        assert!(InnerEstimatorSpec::pwm(-1.0, 3.5).is_err());
    }
}
