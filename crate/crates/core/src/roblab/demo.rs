use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::depth::Dataset;
use crate::error::{Error, Result};
use crate::estimators::{fit_ls, fit_prd, fit_rd_simple, FitConfig};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Eight points with one leverage point moved vertically.
    EightPoint,
    /// 100 correlated normal points, 34 of them replaced by a distant cluster.
    BivariateNormal34,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::EightPoint => "eight_point",
            Self::BivariateNormal34 => "bivariate_normal_34",
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "eight_point" => Ok(Self::EightPoint),
            "bivariate_normal_34" => Ok(Self::BivariateNormal34),
            other => Err(Error::InvalidInput(format!(
                "unknown scenario '{other}' (eight_point, bivariate_normal_34)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoFit {
    /// `clean` or `contaminated`.
    pub variant: String,
    /// `ls`, `rd` or `prd`.
    pub estimator: String,
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotLine {
    pub slope: f64,
    pub intercept: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub scenario: Scenario,
    pub n: usize,
    pub contaminated_rows: Vec<usize>,
    pub fits: Vec<DemoFit>,
    pub points: Vec<PlotPoint>,
    pub lines: Vec<PlotLine>,
}

impl DemoReport {
    pub fn fit(&self, variant: &str, estimator: &str) -> Option<&DemoFit> {
        self.fits.iter().find(|f| f.variant == variant && f.estimator == estimator)
    }
}

const N_BIVARIATE: usize = 100;
const N_REPLACED: usize = 34;
const RHO: f64 = -0.8;
const CLUSTER_CENTER: f64 = 10.0;
const CLUSTER_VAR: f64 = 0.1;

/// A stand-in for the eight-point example: seven points near `y = 0` at
/// `x = 1..7` and the leverage point `(12, 1)`.
pub fn eight_point_synthetic() -> Dataset {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 12.0];
    let y = [0.4, -0.3, 0.2, -0.5, 0.3, -0.2, 0.1, 1.0];
    Dataset::simple(&x, &y).expect("static data is valid")
}

/// Fits least squares, the deepest regression-depth line and the deepest
/// projection-regression line to the clean and contaminated versions of a
/// scenario.
///
/// `eight_point` needs `data` (a simple-regression sample); its
/// contamination moves the largest-`x` point to `y = x`. The bivariate
/// normal scenario is generated from `seed` and ignores `data`.
pub fn demo_contamination(scenario: Scenario, data: Option<&Dataset>, seed: u64) -> Result<DemoReport> {
    let (clean, contaminated, rows) = match scenario {
        Scenario::EightPoint => {
            let data = data.ok_or_else(|| Error::MissingDataset(scenario.to_string()))?;
            if data.p() != 2 || !data.with_intercept() {
                return Err(Error::UnsupportedDimension { p: data.p(), expected: 2 });
            }
            let lev = (0..data.n())
                .max_by(|&a, &b| data.x(a)[0].total_cmp(&data.x(b)[0]))
                .unwrap_or(0);
            let mut moved = data.clone();
            let x = data.x(lev)[0];
            moved.replace_row(lev, x, &[x])?;
            (data.clone(), moved, vec![lev])
        }
        Scenario::BivariateNormal34 => bivariate_normal(seed)?,
    };
    let mut fits = Vec::new();
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for (variant, d) in [("clean", &clean), ("contaminated", &contaminated)] {
        let config = FitConfig::for_sample(d.n(), 2).with_seed(seed);
        let estimates = [
            ("ls", fit_ls(d)?),
            ("rd", fit_rd_simple(d)?),
            ("prd", fit_prd(d, &config)?.beta),
        ];
        for (name, beta) in estimates {
            fits.push(DemoFit {
                variant: variant.into(),
                estimator: name.into(),
                slope: beta[1],
                intercept: beta[0],
            });
            lines.push(PlotLine { slope: beta[1], intercept: beta[0], label: format!("{variant}:{name}") });
        }
        for i in 0..d.n() {
            let label = if variant == "contaminated" && rows.contains(&i) { "contaminated:outlier" } else { variant };
            points.push(PlotPoint { x: d.x(i)[0], y: d.y()[i], label: label.into() });
        }
    }
    Ok(DemoReport { scenario, n: clean.n(), contaminated_rows: rows, fits, points, lines })
}

fn bivariate_normal(seed: u64) -> Result<(Dataset, Dataset, Vec<usize>)> {
    let mut rng = rng::stream(seed, 0x4234);
    let mut x = Vec::with_capacity(N_BIVARIATE);
    let mut y = Vec::with_capacity(N_BIVARIATE);
    let tail = (1.0 - RHO * RHO).sqrt();
    for _ in 0..N_BIVARIATE {
        let z1: f64 = StandardNormal.sample(&mut rng);
        let z2: f64 = StandardNormal.sample(&mut rng);
        x.push(z1);
        y.push(RHO * z1 + tail * z2);
    }
    let clean = Dataset::simple(&x, &y)?;
    let mut rows = index::sample(&mut rng, N_BIVARIATE, N_REPLACED).into_vec();
    rows.sort_unstable();
    let sd = CLUSTER_VAR.sqrt();
    for &i in &rows {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        x[i] = CLUSTER_CENTER + sd * a;
        y[i] = CLUSTER_CENTER + sd * b;
    }
    Ok((clean, Dataset::simple(&x, &y)?, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_point_needs_data() {
        assert_eq!(
            demo_contamination(Scenario::EightPoint, None, 0),
            Err(Error::MissingDataset("eight_point".into()))
        );
    }

    #[test]
    fn scenario_names_roundtrip() {
        for s in [Scenario::EightPoint, Scenario::BivariateNormal34] {
            assert_eq!(s.to_string().parse::<Scenario>().unwrap(), s);
        }
    }

    #[test]
    fn eight_point_moves_leverage_point() {
        let d = eight_point_synthetic();
        let r = demo_contamination(Scenario::EightPoint, Some(&d), 1).unwrap();
        assert_eq!(r.contaminated_rows, vec![7]);
        assert_eq!(r.fits.len(), 6);
        assert_eq!(r.lines.len(), 6);
        assert_eq!(r.points.len(), 16);
        let moved = r.points.iter().find(|p| p.label == "contaminated:outlier").unwrap();
        assert_eq!((moved.x, moved.y), (12.0, 12.0));
    }
}
