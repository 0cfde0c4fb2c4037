//! Univariate location and scale: median, raw MAD, projection depth and the
//! projection-depth weighted mean (PWM).

use crate::error::{Error, Result};

/// Sample median. Even-length samples return the midpoint of the two central
/// order statistics.
pub fn median(samples: &[f64]) -> Result<f64> {
    let mut buf = samples.to_vec();
    median_in_place(&mut buf)
}

/// Median that reorders `buf` instead of copying it.
pub(crate) fn median_in_place(buf: &mut [f64]) -> Result<f64> {
    let n = buf.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mid = n / 2;
    let (lower, upper, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        return Ok(upper);
    }
    let lower = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(0.5 * (lower + upper))
}

/// Raw median absolute deviation (no consistency factor).
pub fn mad(samples: &[f64]) -> Result<f64> {
    let mut buf = samples.to_vec();
    let med = median_in_place(&mut buf)?;
    Ok(mad_about(&mut buf, med))
}

/// MAD of `buf` about a known center; overwrites `buf` with absolute deviations.
pub(crate) fn mad_about(buf: &mut [f64], center: f64) -> f64 {
    for v in buf.iter_mut() {
        *v = (*v - center).abs();
    }
    // nonempty: callers have already taken a median of the same buffer
    median_in_place(buf).unwrap_or(0.0)
}

/// Empirical projection depth `1 / (1 + |point - Med| / MAD)`.
pub fn pd_n(point: f64, samples: &[f64]) -> Result<f64> {
    let mut buf = samples.to_vec();
    let med = median_in_place(&mut buf)?;
    let scale = mad_about(&mut buf, med);
    if scale <= 0.0 {
        return Err(Error::DegenerateScale);
    }
    Ok(1.0 / (1.0 + (point - med).abs() / scale))
}

/// The PWM weight function applied to a depth value `r`.
pub fn pwm_weight(r: f64, k: f64, c: f64) -> f64 {
    if r < c {
        let t = 1.0 - r / c;
        ((-k * t * t).exp() - (-k).exp()) / (1.0 - (-k).exp())
    } else {
        1.0
    }
}

/// Projection-depth weighted mean with tuning constants `k` and `c`.
pub fn pwm(samples: &[f64], k: f64, c: f64) -> Result<f64> {
    if !(k > 0.0 && c > 0.0) {
        return Err(Error::InvalidInput(format!(
            "PWM needs k > 0 and c > 0 (got k = {k}, c = {c})"
        )));
    }
    let mut scratch = samples.to_vec();
    let med = median_in_place(&mut scratch)?;
    let scale = mad_about(&mut scratch, med);
    if scale <= 0.0 {
        return Err(Error::DegenerateScale);
    }
    weighted_by_depth(samples, med, scale, k, c)
}

/// PWM given the median and a strictly positive MAD of `samples`.
pub(crate) fn weighted_by_depth(samples: &[f64], med: f64, scale: f64, k: f64, c: f64) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for &x in samples {
        let depth = 1.0 / (1.0 + (x - med).abs() / scale);
        let w = pwm_weight(depth, k, c);
        num += w * x;
        den += w;
    }
    if den <= 0.0 {
        return Err(Error::ZeroWeightSum);
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_even_singleton() {
        assert_eq!(median(&[1.0, 2.0, 3.0]).unwrap(), 2.0);
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 2.5);
        assert_eq!(median(&[5.0]).unwrap(), 5.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]).unwrap(), 2.5);
        assert_eq!(median(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn mad_examples() {
        assert_eq!(mad(&[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert_eq!(mad(&[7.0, 7.0, 7.0]).unwrap(), 0.0);
        assert_eq!(mad(&[1.0, 2.0, 4.0, 7.0]).unwrap(), 1.5);
        assert_eq!(mad(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn projection_depth_examples() {
        let s = [0.0, 1.0, 2.0];
        assert_eq!(pd_n(1.0, &s).unwrap(), 1.0);
        assert_eq!(pd_n(2.0, &s).unwrap(), 0.5);
        assert_eq!(pd_n(5.0, &s).unwrap(), 0.2);
        assert_eq!(pd_n(1.0, &[3.0, 3.0]), Err(Error::DegenerateScale));
    }

    #[test]
    fn pwm_symmetric_and_degenerate() {
        for &(k, c) in &[(3.0, 3.5), (1.0, 0.5), (10.0, 2.0)] {
            assert!(pwm(&[-1.0, 0.0, 1.0], k, c).unwrap().abs() < 1e-15);
        }
        assert_eq!(pwm(&[2.0, 2.0, 2.0], 3.0, 3.5), Err(Error::DegenerateScale));
        assert!(pwm(&[1.0, 2.0], 0.0, 3.5).is_err());
    }

    #[test]
    fn pwm_reference_value() {
        // med = 1.5, MAD = 1; depths 0.4, 2/3, 2/3, 1/9.5, each weight
        // (exp(-3 (1 - r/3.5)^2) - exp(-3)) / (1 - exp(-3)), evaluated independently.
        let v = pwm(&[0.0, 1.0, 2.0, 10.0], 3.0, 3.5).unwrap();
        assert!((v - 1.5613336752208555).abs() < 1e-12, "{v}");
        assert!(v > 1.5 && v < 3.25);
    }

    #[test]
    fn weight_branches() {
        assert_eq!(pwm_weight(4.0, 3.0, 3.5), 1.0);
        assert!(pwm_weight(0.0, 3.0, 3.5).abs() < 1e-15);
        let w = pwm_weight(1.0, 3.0, 3.5);
        assert!(w > 0.0 && w < 1.0);
    }
}
