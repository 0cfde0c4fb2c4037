//! Downhill simplex (Nelder-Mead) restricted to the convex hull of its
//! starting vertices.

use crate::error::Result;
use crate::linalg::{norm, project_onto_hull};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

struct Vertex {
    x: Vec<f64>,
    /// `f` at the projection of `x`, plus the hull-distance penalty.
    penalized: f64,
    projected: Vec<f64>,
    value: f64,
}

/// Minimizes `f` over the convex hull of `seeds` (whose values are
/// `seed_values`).
///
/// The simplex itself moves freely; each vertex is scored as `f` at its
/// projection onto the hull plus its distance to the hull relative to the
/// hull diameter, in units of the largest seed value. Letting vertices leave
/// the hull keeps the simplex from flattening against a face. The returned
/// point is the projection of the best vertex. Stops when the spread of
/// scores drops below `tol` (in the same units), after `max_iter`
/// iterations, or when the simplex collapses to a point. Multiplying `f` by
/// a positive constant leaves the search path unchanged.
pub fn minimize_in_hull<F>(
    seeds: &[Vec<f64>],
    seed_values: &[f64],
    mut f: F,
    max_iter: usize,
    tol: f64,
) -> Result<SimplexOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    assert!(!seeds.is_empty() && seeds.len() == seed_values.len());
    let diameter = seeds
        .iter()
        .flat_map(|a| seeds.iter().map(move |b| dist(a, b)))
        .fold(0.0, f64::max);
    let top = seed_values.iter().copied().fold(0.0, f64::max);
    let unit = if top > 0.0 && top.is_finite() { top } else { 1.0 };
    let mut verts: Vec<Vertex> = seeds
        .iter()
        .zip(seed_values)
        .map(|(x, &v)| Vertex { x: x.clone(), penalized: v, projected: x.clone(), value: v })
        .collect();
    let k = verts.len();
    let mut evaluations = 0;
    let mut iterations = 0;
    let mut score = |x: Vec<f64>| -> Result<Vertex> {
        evaluations += 1;
        let projected = project_onto_hull(seeds, &x).0;
        let value = f(&projected)?;
        let penalized = value + unit * dist(&x, &projected) / diameter;
        Ok(Vertex { x, penalized, projected, value })
    };

    while k > 1 && diameter > 0.0 && iterations < max_iter {
        verts.sort_by(|a, b| a.penalized.total_cmp(&b.penalized));
        let f_best = verts[0].penalized;
        let f_worst = verts[k - 1].penalized;
        if f_worst - f_best < tol * unit {
            break;
        }
        let best = verts[0].x.clone();
        let size = verts[1..].iter().map(|v| dist(&v.x, &best)).fold(0.0, f64::max);
        if size <= 1e-14 * (1.0 + norm(&best)) {
            break;
        }
        iterations += 1;

        let dim = best.len();
        let mut centroid = vec![0.0; dim];
        for v in &verts[..k - 1] {
            centroid.iter_mut().zip(&v.x).for_each(|(c, x)| *c += x);
        }
        centroid.iter_mut().for_each(|c| *c /= (k - 1) as f64);
        let worst = verts[k - 1].x.clone();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&worst).map(|(c, w)| c + t * (c - w)).collect()
        };

        let r = score(along(REFLECT))?;
        if r.penalized < f_best {
            let e = score(along(EXPAND))?;
            verts[k - 1] = if e.penalized < r.penalized { e } else { r };
            continue;
        }
        if r.penalized < verts[k - 2].penalized {
            verts[k - 1] = r;
            continue;
        }
        let (c, accept) = if r.penalized < f_worst {
            let c = score(along(REFLECT * CONTRACT))?;
            let ok = c.penalized <= r.penalized;
            (c, ok)
        } else {
            let c = score(along(-CONTRACT))?;
            let ok = c.penalized < f_worst;
            (c, ok)
        };
        if accept {
            verts[k - 1] = c;
            continue;
        }
        for v in verts.iter_mut().skip(1) {
            let shrunk: Vec<f64> = best.iter().zip(&v.x).map(|(b, x)| b + SHRINK * (x - b)).collect();
            *v = score(shrunk)?;
        }
    }
    verts.sort_by(|a, b| a.penalized.total_cmp(&b.penalized));
    let best = verts.swap_remove(0);
    Ok(SimplexOutcome { point: best.projected, value: best.value, iterations, evaluations })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
