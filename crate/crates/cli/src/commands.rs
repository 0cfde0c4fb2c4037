use std::fmt::Write as _;
use std::str::FromStr;

use prdepth::depth::UnfitnessEvaluator;
use prdepth::estimators::generate_directions;
use prdepth::oracle::{influence_function, DistSpec};
use prdepth::roblab::{
    default_leverage_grid, demo_contamination, eight_point_synthetic, empirical_if, empirical_mb, rbp_experiment,
    ContaminationPoint, NormalModel, PlotLine, PlotPoint, Scenario,
};
use prdepth::simharness::{efficiency_orderings, relative_efficiency, SimConfig, XDist};
use prdepth::{fit_ls, fit_prd, fit_rd_simple, rdepth_simple, rng, Dataset, FitConfig, ObjectiveSpec};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    BreakdownArgs, Command, DataArgs, DemoArgs, DepthArgs, EstimatorChoice, FitArgs, InfluenceArgs, MbArgs,
    SimulateArgs, TuningArgs,
};
use crate::settings::{parse_ratio, parse_sizes, read_file, CliError, CliResult, Settings};

/// Everything a command produces besides its exit status.
pub struct Outcome {
    pub config: Value,
    pub estimates: Value,
    pub diagnostics: Value,
    pub table: String,
    pub plot: Option<(Vec<PlotPoint>, Vec<PlotLine>)>,
}

const EVAL_TAG: u64 = 0xE7A1;
const SAMPLE_TAG: u64 = 0x5A3F;

pub fn name(command: &Command) -> &'static str {
    match command {
        Command::Fit(_) => "fit",
        Command::Depth(_) => "depth",
        Command::Simulate(_) => "simulate",
        Command::Breakdown(_) => "breakdown",
        Command::Influence(_) => "influence",
        Command::Mb(_) => "mb",
        Command::Demo(_) => "demo",
    }
}

pub fn run(command: &Command, s: &Settings, seed: u64) -> CliResult<Outcome> {
    match command {
        Command::Fit(a) => fit(a, s, seed),
        Command::Depth(a) => depth(a, s, seed),
        Command::Simulate(a) => simulate(a, s, seed),
        Command::Breakdown(a) => breakdown(a, s, seed),
        Command::Influence(a) => influence(a, s, seed),
        Command::Mb(a) => mb(a, s, seed),
        Command::Demo(a) => demo(a, s, seed),
    }
}

impl FromStr for EstimatorChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "prd" => Ok(Self::Prd),
            "rd" => Ok(Self::Rd),
            "ls" => Ok(Self::Ls),
            "all" => Ok(Self::All),
            other => Err(format!("unknown estimator '{other}' (prd, rd, ls, all)")),
        }
    }
}

fn load_data(d: &DataArgs, s: &Settings) -> CliResult<(Dataset, String)> {
    let path = s.path("data", d.data.clone()).ok_or_else(|| CliError::invalid("a dataset is required (--data <PATH>)"))?;
    let intercept = !s.switch("no-intercept", d.no_intercept)?;
    let data = prdepth::io::parse_dataset(&read_file(&path)?, intercept)?;
    Ok((data, path.display().to_string()))
}

fn fit_config(t: &TuningArgs, s: &Settings, n: usize, p: usize, seed: u64) -> CliResult<FitConfig> {
    let mut c = FitConfig::for_sample(n, p).with_seed(seed);
    c.n_beta = s.value_or("n-beta", t.n_beta, c.n_beta)?;
    c.n_dir = s.value_or("n-dir", t.n_dir, c.n_dir)?;
    c.replications = s.value_or("replications", t.replications, c.replications)?;
    c.refine_max_iter = s.value_or("refine-max-iter", t.refine_max_iter, c.refine_max_iter)?;
    c.refine_tol = s.value_or("refine-tol", t.refine_tol, c.refine_tol)?;
    c.inner = s.inner(t.inner.clone(), t.pwm_k, t.pwm_c)?;
    if let Some(o) = s.value::<String>("objective", t.objective.clone())? {
        c.objective = ObjectiveSpec::parse_for(&o, n, p)?;
    }
    c.validate(n, p)?;
    Ok(c)
}

fn simple(data: &Dataset) -> bool {
    data.p() == 2 && data.with_intercept()
}

fn coefficient_names(data: &Dataset) -> Vec<String> {
    let k = data.x(0).len();
    let mut names: Vec<String> = if data.with_intercept() { vec!["intercept".into()] } else { Vec::new() };
    names.extend((1..=k).map(|j| format!("x{j}")));
    names
}

fn data_points(data: &Dataset) -> Vec<PlotPoint> {
    (0..data.n()).map(|i| PlotPoint { x: data.x(i)[0], y: data.y()[i], label: "data".into() }).collect()
}

#[derive(Serialize)]
struct Estimate {
    estimator: String,
    beta: Vec<f64>,
    uf: f64,
    prd: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rdepth: Option<usize>,
}

fn fit(a: &FitArgs, s: &Settings, seed: u64) -> CliResult<Outcome> {
    let (data, path) = load_data(&a.data, s)?;
    let choice = s.value_or("estimator", a.estimator, EstimatorChoice::All)?;
    let config = fit_config(&a.tuning, s, data.n(), data.p(), seed)?;
    let directions =
        generate_directions(&data, config.n_dir, &mut rng::stream(rng::derive_seed(seed, EVAL_TAG, 0), 0));
    let ev = UnfitnessEvaluator::new(&data, &directions, config.inner, config.objective)?;

    let wants = |e: EstimatorChoice| choice == e || choice == EstimatorChoice::All;
    let mut fits: Vec<(&str, Vec<f64>)> = Vec::new();
    let mut skipped = Vec::new();
    let mut prd_search = Value::Null;
    if wants(EstimatorChoice::Prd) {
        let r = fit_prd(&data, &config)?;
        prd_search = json!({
            "uf_on_search_directions": r.uf,
            "prd_on_search_directions": r.prd,
            "replicate_best": r.replicate_best,
            "candidates_evaluated": r.candidates_evaluated,
            "best_seed_uf": r.seed_uf,
        });
        fits.push(("prd", r.beta.to_vec()));
    }
    if wants(EstimatorChoice::Rd) {
        if simple(&data) {
            fits.push(("rd", fit_rd_simple(&data)?.to_vec()));
        } else if choice == EstimatorChoice::Rd {
            return Err(prdepth::Error::UnsupportedDimension { p: data.p(), expected: 2 }.into());
        } else {
            skipped.push("rd: needs one predictor and an intercept");
        }
    }
    if wants(EstimatorChoice::Ls) {
        fits.push(("ls", fit_ls(&data)?.to_vec()));
    }

    let mut estimates = Vec::new();
    for (name, beta) in fits {
        let report = ev.report(&beta)?;
        let rdepth = if simple(&data) { Some(rdepth_simple(&beta, &data)?) } else { None };
        estimates.push(Estimate { estimator: name.into(), beta, uf: report.uf, prd: report.prd, rdepth });
    }

    let names = coefficient_names(&data);
    let mut table = String::new();
    let _ = write!(table, "{:<10}", "estimator");
    for n in &names {
        let _ = write!(table, " {n:>14}");
    }
    let _ = writeln!(table, " {:>10} {:>10}", "prd", "uf");
    for e in &estimates {
        let _ = write!(table, "{:<10}", e.estimator);
        for b in &e.beta {
            let _ = write!(table, " {b:>14.8}");
        }
        let _ = writeln!(table, " {:>10.6} {:>10.6}", e.prd, e.uf);
    }
    for note in &skipped {
        let _ = writeln!(table, "skipped {note}");
    }

    let plot = simple(&data).then(|| {
        let lines = estimates
            .iter()
            .map(|e| PlotLine { slope: e.beta[1], intercept: e.beta[0], label: e.estimator.clone() })
            .collect();
        (data_points(&data), lines)
    });
    Ok(Outcome {
        config: json!({ "data": path, "n": data.n(), "p": data.p(), "intercept": data.with_intercept(),
                        "estimator": format!("{choice:?}").to_lowercase(), "fit": config }),
        estimates: serde_json::to_value(&estimates).map_err(internal)?,
        diagnostics: json!({
            "coefficients": names,
            "evaluation_directions": ev.n_directions_used(),
            "mad_y": ev.scale(),
            "prd_search": prd_search,
            "skipped": skipped,
        }),
        table,
        plot,
    })
}

fn depth(a: &DepthArgs, s: &Settings, seed: u64) -> CliResult<Outcome> {
    let (data, path) = load_data(&a.data, s)?;
    let raw = s.value::<String>("beta", a.beta.clone())?.ok_or_else(|| CliError::invalid("--beta is required"))?;
    let beta = prdepth::io::parse_real_list(&raw)?;
    if beta.len() != data.p() {
        return Err(CliError::invalid(format!("--beta has {} values, the model has {}", beta.len(), data.p())));
    }
    let config = fit_config(&a.tuning, s, data.n(), data.p(), seed)?;
    let directions =
        generate_directions(&data, config.n_dir, &mut rng::stream(rng::derive_seed(seed, EVAL_TAG, 0), 0));
    let report = UnfitnessEvaluator::new(&data, &directions, config.inner, config.objective)?.report(&beta)?;
    let rdepth = if simple(&data) { Some(rdepth_simple(&beta, &data)?) } else { None };

    let mut table = format!("uf  {:.10}\nprd {:.10}\n", report.uf, report.prd);
    if let Some(d) = rdepth {
        let _ = writeln!(table, "rd  {d}");
    }
    let plot = simple(&data)
        .then(|| (data_points(&data), vec![PlotLine { slope: beta[1], intercept: beta[0], label: "beta".into() }]));
    Ok(Outcome {
        config: json!({ "data": path, "n": data.n(), "p": data.p(), "intercept": data.with_intercept(),
                        "beta": beta, "n_dir": config.n_dir, "inner": config.inner, "objective": config.objective }),
        estimates: json!({ "beta": report.beta, "uf": report.uf, "prd": report.prd, "rdepth": rdepth }),
        diagnostics: json!({ "directions_used": report.n_directions_used, "coefficients": coefficient_names(&data) }),
        table,
        plot,
    })
}

fn simulate(a: &SimulateArgs, s: &Settings, seed: u64) -> CliResult<Outcome> {
    let n_values = parse_sizes(&s.value_or("n-values", a.n_values.clone(), "10,20,40,100".to_string())?)?;
    let x_dist: XDist = s.value_or("x-dist", a.x_dist.clone(), "normal".to_string())?.parse()?;
    let mut sim = SimConfig::desk_scale(n_values, x_dist);
    sim.n_rep = s.value_or("n-rep", a.n_rep, sim.n_rep)?;
    sim.error_sigma = s.value_or("sigma", a.sigma, sim.error_sigma)?;
    sim.inner = s.inner(a.inner.clone(), a.pwm_k, a.pwm_c)?;
    sim.seed = seed;
    let report = relative_efficiency(&sim)?;
    let orderings = efficiency_orderings(&report);

    let mut table = format!(
        "{:>5} {:<4} {:>8} {:>8} {:>10} {:>8}\n",
        "n", "est", "RE slope", "se", "RE interc", "se"
    );
    let mut points = Vec::new();
    for r in &report.rows {
        let est = format!("{:?}", r.estimator).to_lowercase();
        let _ = writeln!(
            table,
            "{:>5} {:<4} {:>8.4} {:>8.4} {:>10.4} {:>8.4}",
            r.n, est, r.re_slope, r.se_slope, r.re_intercept, r.se_intercept
        );
        points.push(PlotPoint { x: r.n as f64, y: r.re_slope, label: format!("{est}:slope") });
        points.push(PlotPoint { x: r.n as f64, y: r.re_intercept, label: format!("{est}:intercept") });
    }
    let flag = |v: Option<bool>| v.map_or("undefined".to_string(), |b| b.to_string());
    let _ = writeln!(table, "PRD slope RE above RD at every n: {}", flag(orderings.slope_prd_over_rd));
    let _ = writeln!(table, "PRD RE at least RD in every column: {}", flag(orderings.prd_at_least_rd_everywhere));
    let lines = vec![PlotLine { slope: 0.0, intercept: 1.0, label: "ls".into() }];
    Ok(Outcome {
        config: serde_json::to_value(&sim).map_err(internal)?,
        estimates: serde_json::to_value(&report.rows).map_err(internal)?,
        diagnostics: json!({
            "orderings": orderings,
            "redrawn": report.redrawn,
            "error_sigma": report.error_sigma,
            "re_definition": report.re_definition,
        }),
        table,
        plot: Some((points, lines)),
    })
}

fn breakdown(a: &BreakdownArgs, s: &Settings, seed: u64) -> CliResult<Outcome> {
    let given = s.path("data", a.data.data.clone());
    let n_flag = s.value("n", a.n)?;
    let p_flag = s.value("p", a.p)?;
    let (data, source) = match given {
        Some(_) => {
            if n_flag.is_some() || p_flag.is_some() {
                return Err(CliError::invalid("--n and --p describe a generated sample; drop them with --data"));
            }
            load_data(&a.data, s)?
        }
        None => {
            let (n, p) = (n_flag.unwrap_or(8), p_flag.unwrap_or(2));
            if p < 2 || n < p {
                return Err(CliError::invalid("a generated sample needs p >= 2 and n >= p"));
            }
            let raw = NormalModel { p: p - 1 }.sample(n, &mut rng::stream(rng::derive_seed(seed, SAMPLE_TAG, 0), 0))?;
            let x: Vec<Vec<f64>> = (0..n).map(|i| raw.x(i).to_vec()).collect();
            (Dataset::new(raw.y().to_vec(), x, true)?, format!("standard normal, n = {n}, p = {p}"))
        }
    };
    let threshold = s.value("escape-threshold", a.escape_threshold)?;
    let config = fit_config(&a.tuning, s, data.n(), data.p(), seed)?;
    let r = rbp_experiment(&data, &config, threshold)?;

    let mut table = String::new();
    let _ = writeln!(table, "{:>3}  {:>12} {:>12} {:>12} {:>12} {:>12}  broke", "m", "1e2", "1e3", "1e4", "1e5", "1e6");
    let mut points = Vec::new();
    for t in &r.trials {
        let _ = write!(table, "{:>3} ", t.m);
        for (norm, tilt) in t.norms.iter().zip(prdepth::roblab::TILT_SCHEDULE) {
            let _ = write!(table, " {norm:>12.4e}");
            points.push(PlotPoint { x: tilt, y: *norm, label: format!("m={}", t.m) });
        }
        let _ = writeln!(table, "  {}", t.broke);
    }
    let empirical = r.rbp_empirical.map_or("none".to_string(), |f| f.to_string());
    let _ = writeln!(table, "empirical RBP {empirical}, formula {}", r.rbp_formula);
    let bounded = r.below_break_bounded.map_or("not checked".to_string(), |b| b.to_string());
    let _ = writeln!(table, "bounded one point below: {bounded} (max norm {:.4e})", r.below_break_max_norm);
    let lines = vec![PlotLine { slope: 0.0, intercept: r.escape_threshold, label: "escape_threshold".into() }];
    Ok(Outcome {
        config: json!({ "data": source, "n": data.n(), "p": data.p(), "escape_threshold": threshold, "fit": config }),
        estimates: json!({
            "m_break_empirical": r.m_break_empirical,
            "rbp_empirical": r.rbp_empirical,
            "rbp_formula": r.rbp_formula,
            "matches_formula": r.matches_formula,
            "below_break_bounded": r.below_break_bounded,
        }),
        diagnostics: serde_json::to_value(&r).map_err(internal)?,
        table,
        plot: Some((points, lines)),
    })
}

fn influence(a: &InfluenceArgs, s: &Settings, seed: u64) -> CliResult<Outcome> {
    let y0 = s.value("y0", a.y0)?.ok_or_else(|| CliError::invalid("--y0 is required"))?;
    let raw = s.value::<String>("x0", a.x0.clone())?.ok_or_else(|| CliError::invalid("--x0 is required"))?;
    let x0 = prdepth::io::parse_real_list(&raw)?;
    let n = s.value_or("n", a.n, 200)?;
    let eps = prdepth::io::parse_real_list(&s.value_or("eps", a.eps.clone(), "0.1,0.05,0.02".to_string())?)?;
    let p = x0.len();
    let config = fit_config(&a.tuning, s, n, p, seed)?;
    let z = ContaminationPoint { y0, x0 };
    let r = empirical_if(&z, &NormalModel { p }, n, &eps, &config)?;

    let on_axis = z.x0[0] != 0.0 && z.x0[1..].iter().all(|&v| v == 0.0);
    let oracle = if on_axis {
        let normal = DistSpec::standard_normal();
        Some(influence_function(y0 / z.x0[0], &normal, &normal, p)?)
    } else {
        None
    };

    let mut table = String::new();
    let mut points = Vec::new();
    for ((e, m), q) in eps.iter().zip(&r.replaced).zip(&r.quotients) {
        let _ = writeln!(table, "eps {e:<8} m {m:<5} quotient {}", fmt_vec(q));
        for (j, v) in q.iter().enumerate() {
            points.push(PlotPoint { x: *m as f64 / n as f64, y: *v, label: format!("x{}", j + 1) });
        }
    }
    let _ = writeln!(table, "extrapolated {}", fmt_vec(&r.extrapolated));
    let mut lines = Vec::new();
    if let Some(o) = &oracle {
        let _ = writeln!(table, "oracle       {}  (z0 = {}, gamma* = {:.6})", fmt_vec(&o.vector), o.z0, o.gamma_star.unwrap_or(f64::NAN));
        for (j, v) in o.vector.iter().enumerate() {
            lines.push(PlotLine { slope: 0.0, intercept: *v, label: format!("oracle:x{}", j + 1) });
        }
    }
    Ok(Outcome {
        config: json!({ "z": z, "n": n, "eps": eps, "fit": config }),
        estimates: json!({ "quotients": r.quotients, "extrapolated": r.extrapolated, "oracle": oracle }),
        diagnostics: json!({ "replaced": r.replaced }),
        table,
        plot: Some((points, lines)),
    })
}

fn mb(a: &MbArgs, s: &Settings, seed: u64) -> CliResult<Outcome> {
    let eps = parse_ratio(&s.value_or("eps", a.eps.clone(), "1/3".to_string())?)?;
    let n = s.value_or("n", a.n, 200)?;
    let p = s.value_or("p", a.p, 2)?;
    if p == 0 {
        return Err(CliError::invalid("p must be positive"));
    }
    let config = fit_config(&a.tuning, s, n, p, seed)?;
    let grid = default_leverage_grid(p);
    let r = empirical_mb(&NormalModel { p }, n, eps, &grid, &config)?;

    let mut table = format!("eps {eps:.6}, n {n}, replaced {}\n", r.m);
    let _ = writeln!(table, "empirical max bias {:.6}", r.max_bias);
    if let Some(z) = &r.argmax_point {
        let _ = writeln!(table, "attained at y0 {} x0 {}", z.y0, fmt_vec(&z.x0));
    }
    let _ = writeln!(table, "oracle interval [{:.6}, {:.6}]", r.oracle_lower, r.oracle_upper);
    let points = r
        .grid
        .iter()
        .zip(&r.biases)
        .map(|(z, b)| PlotPoint { x: z.norm(), y: *b, label: "grid".into() })
        .collect();
    let lines = vec![
        PlotLine { slope: 0.0, intercept: r.oracle_lower, label: "oracle_lower".into() },
        PlotLine { slope: 0.0, intercept: r.oracle_upper, label: "oracle_upper".into() },
    ];
    Ok(Outcome {
        config: json!({ "eps": eps, "n": n, "p": p, "grid_points": grid.len(), "fit": config }),
        estimates: json!({ "max_bias": r.max_bias, "argmax_point": r.argmax_point,
                           "oracle_lower": r.oracle_lower, "oracle_upper": r.oracle_upper }),
        diagnostics: serde_json::to_value(&r).map_err(internal)?,
        table,
        plot: Some((points, lines)),
    })
}

fn demo(a: &DemoArgs, s: &Settings, seed: u64) -> CliResult<Outcome> {
    let scenario: Scenario = s
        .value::<String>("scenario", a.scenario.clone())?
        .ok_or_else(|| CliError::invalid("--scenario is required (eight_point, bivariate_normal_34)"))?
        .parse()?;
    let path = s.path("data", a.data.clone());
    let synthetic = s.switch("synthetic", a.synthetic)?;
    let (data, source) = match (&path, synthetic) {
        (Some(_), true) => return Err(CliError::invalid("--data and --synthetic are exclusive")),
        (Some(p), false) => (Some(prdepth::io::parse_dataset(&read_file(p)?, true)?), p.display().to_string()),
        (None, true) => (Some(eight_point_synthetic()), "synthetic".to_string()),
        (None, false) => (None, "generated".to_string()),
    };
    let r = demo_contamination(scenario, data.as_ref(), seed)?;

    let mut table = format!("{:<13} {:<4} {:>12} {:>12}\n", "variant", "est", "slope", "intercept");
    for f in &r.fits {
        let _ = writeln!(table, "{:<13} {:<4} {:>12.6} {:>12.6}", f.variant, f.estimator, f.slope, f.intercept);
    }
    Ok(Outcome {
        config: json!({ "scenario": scenario, "data": source }),
        estimates: serde_json::to_value(&r.fits).map_err(internal)?,
        diagnostics: json!({ "n": r.n, "contaminated_rows": r.contaminated_rows }),
        table,
        plot: Some((r.points, r.lines)),
    })
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn internal(e: serde_json::Error) -> CliError {
    CliError::Internal(e.to_string())
}
