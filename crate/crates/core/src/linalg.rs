//! Small dense linear algebra for `p x p` systems with `p` in the single digits.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
///
/// `a` is row-major `p x p` and is destroyed; `b` is overwritten with `x`.
/// Returns `None` when a pivot falls below `1e-12` times the largest entry of `A`.
pub fn solve_in_place(a: &mut [f64], b: &mut [f64], p: usize) -> Option<()> {
    debug_assert_eq!(a.len(), p * p);
    debug_assert_eq!(b.len(), p);
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if !(scale > 0.0 && scale.is_finite()) {
        return None;
    }
    let tol = 1e-12 * scale;
    for col in 0..p {
        let pivot_row = (col..p)
            .max_by(|&i, &j| a[i * p + col].abs().total_cmp(&a[j * p + col].abs()))
            .unwrap_or(col);
        if a[pivot_row * p + col].abs() <= tol {
            return None;
        }
        if pivot_row != col {
            for k in 0..p {
                a.swap(col * p + k, pivot_row * p + k);
            }
            b.swap(col, pivot_row);
        }
        let piv = a[col * p + col];
        for row in col + 1..p {
            let f = a[row * p + col] / piv;
            if f == 0.0 {
                continue;
            }
            for k in col..p {
                a[row * p + k] -= f * a[col * p + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..p).rev() {
        let mut s = b[col];
        for k in col + 1..p {
            s -= a[col * p + k] * b[k];
        }
        b[col] = s / a[col * p + col];
    }
    Some(())
}

/// Advances `idx` (strictly increasing, values `< n`) to the next
/// lexicographic k-combination. Returns `false` after the last one.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `C(n, k)`, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Orthonormal basis of the span of `rows` (modified Gram-Schmidt); rows
/// that are numerically dependent are dropped.
pub fn orthonormal_basis(rows: &[&[f64]]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        let mut v = row.to_vec();
        let scale = norm(&v);
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, bi)| *x -= c * bi);
        }
        let nv = norm(&v);
        if nv > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    basis
}

/// Removes the components of `v` along an orthonormal `basis`.
pub fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        v.iter_mut().zip(b).for_each(|(x, bi)| *x -= c * bi);
    }
}

/// A deterministic unit vector orthogonal to every row in `rows`, or `None`
/// when the rows span the whole space.
pub fn null_vector(rows: &[&[f64]], p: usize) -> Option<Vec<f64>> {
    let basis = orthonormal_basis(rows);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for j in 0..p {
        let mut e = vec![0.0; p];
        e[j] = 1.0;
        project_out(&mut e, &basis);
        let ne = norm(&e);
        if best.as_ref().is_none_or(|(b, _)| ne > *b) {
            best = Some((ne, e));
        }
    }
    let (ne, e) = best?;
    if ne < 1e-10 {
        return None;
    }
    Some(e.into_iter().map(|x| x / ne).collect())
}

/// Minimum-norm solution of the underdetermined system `rows * beta = rhs`.
pub fn min_norm_solution(rows: &[&[f64]], rhs: &[f64], p: usize) -> Option<Vec<f64>> {
    let k = rows.len();
    let mut gram = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            gram[i * k + j] = dot(rows[i], rows[j]);
        }
    }
    let mut mult = rhs.to_vec();
    solve_in_place(&mut gram, &mut mult, k)?;
    let mut beta = vec![0.0; p];
    for (row, m) in rows.iter().zip(&mult) {
        beta.iter_mut().zip(row.iter()).for_each(|(b, r)| *b += m * r);
    }
    Some(beta)
}

/// Euclidean projection of `target` onto the convex hull of `vertices`.
///
/// Every face is tried (the hulls here have at most a handful of vertices):
/// for each vertex subset the affine projection is computed and kept when its
/// barycentric weights are nonnegative. Returns the projected point and the
/// weights over all vertices.
pub fn project_onto_hull(vertices: &[Vec<f64>], target: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let k = vertices.len();
    assert!(k > 0 && k < 16, "hull projection expects 1..16 vertices");
    let dim = target.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1u32 << k) {
        let members: Vec<usize> = (0..k).filter(|j| mask & (1 << j) != 0).collect();
        let Some(lambda) = affine_projection_weights(vertices, &members, target) else {
            continue;
        };
        if lambda.iter().any(|&l| l < -1e-12) {
            continue;
        }
        let mut weights = vec![0.0; k];
        for (&j, &l) in members.iter().zip(&lambda) {
            weights[j] = l.max(0.0);
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let point = combine(vertices, &weights, dim);
        let dist: f64 = point.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, weights));
        }
    }
    // singletons always succeed, so `best` is set
    let weights = best.map(|(_, w)| w).unwrap_or_else(|| {
        let mut w = vec![0.0; k];
        w[0] = 1.0;
        w
    });
    (combine(vertices, &weights, dim), weights)
}

fn combine(vertices: &[Vec<f64>], weights: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (v, &w) in vertices.iter().zip(weights) {
        if w != 0.0 {
            out.iter_mut().zip(v).for_each(|(o, x)| *o += w * x);
        }
    }
    out
}

fn affine_projection_weights(vertices: &[Vec<f64>], members: &[usize], target: &[f64]) -> Option<Vec<f64>> {
    let base = &vertices[members[0]];
    let m = members.len() - 1;
    if m == 0 {
        return Some(vec![1.0]);
    }
    let diffs: Vec<Vec<f64>> = members[1..]
        .iter()
        .map(|&j| vertices[j].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let rel: Vec<f64> = target.iter().zip(base).map(|(a, b)| a - b).collect();
    let mut gram = vec![0.0; m * m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            gram[i * m + j] = dot(&diffs[i], &diffs[j]);
        }
        rhs[i] = dot(&diffs[i], &rel);
    }
    solve_in_place(&mut gram, &mut rhs, m)?;
    let mut lambda = Vec::with_capacity(m + 1);
    lambda.push(1.0 - rhs.iter().sum::<f64>());
    lambda.extend(rhs);
    Some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let mut a = vec![2.0, 1.0, 1.0, 3.0];
        let mut b = vec![3.0, 5.0];
        solve_in_place(&mut a, &mut b, 2).unwrap();
        assert!((b[0] - 0.8).abs() < 1e-14 && (b[1] - 1.4).abs() < 1e-14);
        let mut a = vec![1.0, 2.0, 2.0, 4.0];
        assert!(solve_in_place(&mut a, &mut [1.0, 1.0], 2).is_none());
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
        assert_eq!(binomial(8, 2), 28);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn null_vector_is_orthogonal() {
        let r1 = [1.0, 2.0, 3.0];
        let r2 = [0.0, 1.0, -1.0];
        let v = null_vector(&[&r1, &r2], 3).unwrap();
        assert!(dot(&v, &r1).abs() < 1e-12 && dot(&v, &r2).abs() < 1e-12);
        assert!((norm(&v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn min_norm_hits_constraints() {
        let r = [1.0, 4.0];
        let b = min_norm_solution(&[&r], &[2.0], 2).unwrap();
        assert!((dot(&b, &r) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hull_projection() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let (p, w) = project_onto_hull(&tri, &[0.2, 0.3]);
        assert!((p[0] - 0.2).abs() < 1e-14 && (p[1] - 0.3).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let (p, _) = project_onto_hull(&tri, &[2.0, 2.0]);
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let (p, _) = project_onto_hull(&tri, &[-1.0, -3.0]);
        assert!(p[0].abs() < 1e-12 && p[1].abs() < 1e-12);
        // degenerate hull: duplicated vertices
        let seg = vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![2.0, 0.0]];
        let (p, _) = project_onto_hull(&seg, &[1.0, 5.0]);
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12);
    }
}
