use prdepth::depth::{mad, median};
use prdepth::oracle::{contaminated_mad, contaminated_median, mb_bounds, DistSpec};
use prdepth::rng::stream;

const BATCHES: usize = 20;
const BATCH: usize = 20_000;

/// Sample median and MAD of `(1 - eps) F + eps delta_x` per batch, with the
/// contaminating mass placed exactly.
fn batch_stats(f: &DistSpec, eps: f64, x: f64, seed: u64) -> Vec<(f64, f64)> {
    let bad = (eps * BATCH as f64).round() as usize;
    (0..BATCHES)
        .map(|b| {
            let mut rng = stream(seed, b as u64);
            let mut v: Vec<f64> = (0..BATCH - bad).map(|_| f.sample(&mut rng)).collect();
            v.resize(BATCH, x);
            (median(&v).unwrap(), mad(&v).unwrap())
        })
        .collect()
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn check(f: &DistSpec, eps: f64, x: f64, seed: u64) {
    let stats = batch_stats(f, eps, x, seed);
    let (med, med_se) = mean_se(&stats.iter().map(|s| s.0).collect::<Vec<_>>());
    let (scale, scale_se) = mean_se(&stats.iter().map(|s| s.1).collect::<Vec<_>>());
    let want_med = contaminated_median(f, eps, x).unwrap();
    let want_mad = contaminated_mad(f, eps, x).unwrap();
    assert!((med - want_med).abs() <= 3.0 * med_se + 1e-12, "eps {eps} x {x}: median {med} vs {want_med} (se {med_se})");
    assert!(
        (scale - want_mad).abs() <= 3.0 * scale_se + 1e-12,
        "eps {eps} x {x}: mad {scale} vs {want_mad} (se {scale_se})"
    );
}

#[test]
fn normal_mixtures_match_closed_form() {
    let f = DistSpec::standard_normal();
    for (k, &(eps, x)) in [(0.1, 0.5), (0.2, 3.0), (0.3, -50.0), (0.4, 1.2), (0.0, 7.0)].iter().enumerate() {
        check(&f, eps, x, 100 + k as u64);
    }
}

#[test]
fn heavy_tailed_mixtures_match_closed_form() {
    let f = DistSpec::student_t(3.0).unwrap();
    for (k, &(eps, x)) in [(0.15, 10.0), (0.25, -0.3)].iter().enumerate() {
        check(&f, eps, x, 200 + k as u64);
    }
}

#[test]
fn bias_bound_is_a_quantile_of_the_ratio_law() {
    let y = DistSpec::standard_normal();
    let j = DistSpec::ratio_of_normals(&y, &y).unwrap();
    let bounds = mb_bounds(&j, &y, 1.0 / 3.0).unwrap();
    // the ratio of independent standard normals is standard Cauchy
    let q = bounds.q_eps;
    let want = (std::f64::consts::PI * (q - 0.5)).tan();
    assert!((bounds.b - want).abs() < 1e-8, "{} vs {want}", bounds.b);
    assert!((bounds.mb_upper - 2.0 * bounds.mb_lower).abs() < 1e-15);

    let mut rng = stream(300, 0);
    let n = 400_000;
    let below = (0..n).filter(|_| j.sample(&mut rng) <= bounds.b).count() as f64 / n as f64;
    let se = (q * (1.0 - q) / n as f64).sqrt();
    assert!((below - q).abs() <= 3.0 * se, "{below} vs {q}");
}
