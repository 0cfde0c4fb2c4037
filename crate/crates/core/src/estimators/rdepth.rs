//! Regression depth of a line and the deepest line for simple regression.

use crate::depth::{Coefficients, Dataset};
use crate::error::{Error, Result};

fn require_simple(data: &Dataset) -> Result<()> {
    if data.p() != 2 || !data.with_intercept() {
        return Err(Error::UnsupportedDimension { p: data.p(), expected: 2 });
    }
    Ok(())
}

/// Regression depth of the line `beta = (intercept, slope)`: the fewest
/// observations whose removal turns it into a nonfit.
///
/// Computed by sweeping a split point over the gaps between distinct sorted
/// `x` values (and both ends), taking `min(L+ + R-, L- + R+)` where the
/// counts are residual signs left and right of the split; zero residuals
/// count on both sides.
pub fn rdepth_simple(beta: &[f64], data: &Dataset) -> Result<usize> {
    require_simple(data)?;
    if beta.len() != 2 {
        return Err(Error::InvalidInput("beta must have length 2".into()));
    }
    let order = x_order(data);
    Ok(depth_sorted(data, &order, beta))
}

fn x_order(data: &Dataset) -> Vec<usize> {
    let mut order: Vec<usize> = (0..data.n()).collect();
    order.sort_by(|&a, &b| data.x(a)[0].total_cmp(&data.x(b)[0]));
    order
}

fn depth_sorted(data: &Dataset, order: &[usize], beta: &[f64]) -> usize {
    let n = order.len();
    let mut pos = Vec::with_capacity(n);
    let mut neg = Vec::with_capacity(n);
    for &i in order {
        let r = data.residual(i, beta);
        pos.push(usize::from(r >= 0.0));
        neg.push(usize::from(r <= 0.0));
    }
    let (total_pos, total_neg): (usize, usize) = (pos.iter().sum(), neg.iter().sum());
    // split before everything
    let mut best = total_pos.min(total_neg);
    let (mut lp, mut ln) = (0, 0);
    let mut k = 0;
    while k < n {
        let x = data.x(order[k])[0];
        while k < n && data.x(order[k])[0] == x {
            lp += pos[k];
            ln += neg[k];
            k += 1;
        }
        let (rp, rn) = (total_pos - lp, total_neg - ln);
        best = best.min((lp + rn).min(ln + rp));
    }
    best
}

/// Deepest line among all lines through two observations with distinct `x`.
/// Lines tied at the maximum depth are averaged coordinate-wise.
pub fn fit_rd_simple(data: &Dataset) -> Result<Coefficients> {
    require_simple(data)?;
    let n = data.n();
    let order = x_order(data);
    let mut best_depth = 0;
    let mut sum = [0.0, 0.0];
    let mut count = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let (xi, xj) = (data.x(i)[0], data.x(j)[0]);
            if xi == xj {
                continue;
            }
            let slope = (data.y()[j] - data.y()[i]) / (xj - xi);
            let intercept = data.y()[i] - slope * xi;
            let beta = [intercept, slope];
            if !(intercept.is_finite() && slope.is_finite()) {
                continue;
            }
            let d = depth_sorted(data, &order, &beta);
            if d > best_depth || count == 0 {
                best_depth = d;
                sum = [0.0, 0.0];
                count = 0;
            }
            if d == best_depth {
                sum[0] += intercept;
                sum[1] += slope;
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::RankDeficient);
    }
    Coefficients::new(vec![sum[0] / count as f64, sum[1] / count as f64])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapsed_line_through_collinear_points() {
        let d = Dataset::simple(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap();
        assert_eq!(rdepth_simple(&[0.0, 2.0], &d).unwrap(), 3);
    }

    #[test]
    fn line_below_everything() {
        let d = Dataset::simple(&[1.0, 2.0, 3.0, 4.0], &[5.0, 6.0, 5.0, 7.0]).unwrap();
        assert_eq!(rdepth_simple(&[0.0, 0.0], &d).unwrap(), 0);
    }

    #[test]
    fn shift_invariance() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.3, -0.2, 0.5, 0.1, -0.4];
        let d = Dataset::simple(&x, &y).unwrap();
        let ys: Vec<f64> = y.iter().map(|v| v + 10.0).collect();
        let ds = Dataset::simple(&x, &ys).unwrap();
        assert_eq!(rdepth_simple(&[0.0, 0.0], &d).unwrap(), rdepth_simple(&[10.0, 0.0], &ds).unwrap());
    }

    #[test]
    fn rejects_other_dimensions() {
        let d = Dataset::new(vec![1.0, 2.0, 3.0], vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]], true)
            .unwrap();
        assert!(matches!(rdepth_simple(&[0.0; 3], &d), Err(Error::UnsupportedDimension { .. })));
        assert!(fit_rd_simple(&d).is_err());
    }

    #[test]
    fn deepest_line_of_noiseless_data() {
        let x = [0.0, 1.0, 2.5, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
        let d = Dataset::simple(&x, &y).unwrap();
        let b = fit_rd_simple(&d).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-12 && (b[1] + 1.0).abs() < 1e-12);
        assert_eq!(rdepth_simple(&b, &d).unwrap(), 5);
    }
}
