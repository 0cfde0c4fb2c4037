use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Projection regression depth: deepest fits, depth evaluation and
/// robustness experiments.
#[derive(Debug, Parser)]
#[command(name = "prdepth", version, args_override_self = true)]
pub struct Cli {
    /// Master seed; every random choice derives from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write a JSON report (manifest, estimates, diagnostics) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Write points.csv and lines.csv into this directory.
    #[arg(long = "plot-data", global = true, value_name = "DIR")]
    pub plot_data: Option<PathBuf>,

    /// key = value file with defaults for any flag; flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Record wall-clock time in the manifest (makes reports differ between runs).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a dataset with the deepest PRD fit, the deepest RD line and/or least squares.
    Fit(FitArgs),
    /// Unfitness and depth of a given coefficient vector.
    Depth(DepthArgs),
    /// Monte-Carlo efficiency relative to least squares.
    Simulate(SimulateArgs),
    /// Replacement breakdown by the tilted-hyperplane construction.
    Breakdown(BreakdownArgs),
    /// Finite-difference influence of one contaminating point.
    Influence(InfluenceArgs),
    /// Empirical maximum bias over a leverage grid, with the oracle interval.
    Mb(MbArgs),
    /// Clean versus contaminated fits for a demonstration scenario.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorChoice {
    Prd,
    Rd,
    Ls,
    All,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Dataset CSV with header y,x1,...
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,

    /// Fit without an intercept column.
    #[arg(long)]
    pub no_intercept: bool,
}

/// Tuning of the deepest-fit search and of the depth function.
#[derive(Debug, Args)]
pub struct TuningArgs {
    /// Exact-fit candidates per replicate.
    #[arg(long)]
    pub n_beta: Option<usize>,

    /// Projection directions per replicate (default 100 + 2n).
    #[arg(long)]
    pub n_dir: Option<usize>,

    /// Independent replicates of the search.
    #[arg(long)]
    pub replications: Option<usize>,

    /// Inner location estimator: median or pwm.
    #[arg(long)]
    pub inner: Option<String>,

    /// PWM shape k (default 3).
    #[arg(long)]
    pub pwm_k: Option<f64>,

    /// PWM cutoff c (default 3.5).
    #[arg(long)]
    pub pwm_c: Option<f64>,

    /// abs-of-median, median-of-abs, t1, t2, t3, hth-order:H, sum-smallest:H.
    #[arg(long)]
    pub objective: Option<String>,

    /// Simplex iteration budget.
    #[arg(long)]
    pub refine_max_iter: Option<usize>,

    /// Simplex stopping tolerance on unfitness.
    #[arg(long)]
    pub refine_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[arg(long, value_enum)]
    pub estimator: Option<EstimatorChoice>,

    #[command(flatten)]
    pub tuning: TuningArgs,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Coefficients, intercept first, e.g. "0.5,-1".
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,

    #[command(flatten)]
    pub tuning: TuningArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Sample sizes, e.g. "10,20,40,100".
    #[arg(long)]
    pub n_values: Option<String>,

    /// Replicates per sample size.
    #[arg(long)]
    pub n_rep: Option<usize>,

    /// Predictor distribution: normal or t2.
    #[arg(long)]
    pub x_dist: Option<String>,

    /// Standard deviation of the errors.
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Inner location estimator: median or pwm.
    #[arg(long)]
    pub inner: Option<String>,

    #[arg(long)]
    pub pwm_k: Option<f64>,

    #[arg(long)]
    pub pwm_c: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BreakdownArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Sample size of a generated standard normal sample (when --data is absent).
    #[arg(long)]
    pub n: Option<usize>,

    /// Coefficients of the generated sample, intercept included.
    #[arg(long)]
    pub p: Option<usize>,

    /// Norm above which the fit counts as carried away.
    #[arg(long)]
    pub escape_threshold: Option<f64>,

    #[command(flatten)]
    pub tuning: TuningArgs,
}

#[derive(Debug, Args)]
pub struct InfluenceArgs {
    /// Response of the contaminating point.
    #[arg(long, allow_hyphen_values = true)]
    pub y0: Option<f64>,

    /// Predictors of the contaminating point, e.g. "1000,0".
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,

    /// Sample size.
    #[arg(long)]
    pub n: Option<usize>,

    /// Decreasing contamination levels, e.g. "0.1,0.05,0.02".
    #[arg(long)]
    pub eps: Option<String>,

    #[command(flatten)]
    pub tuning: TuningArgs,
}

#[derive(Debug, Args)]
pub struct MbArgs {
    /// Contamination fraction; a fraction such as 1/3 is accepted.
    #[arg(long)]
    pub eps: Option<String>,

    /// Sample size.
    #[arg(long)]
    pub n: Option<usize>,

    /// Number of predictors (no intercept).
    #[arg(long)]
    pub p: Option<usize>,

    #[command(flatten)]
    pub tuning: TuningArgs,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// eight_point or bivariate_normal_34.
    #[arg(long)]
    pub scenario: Option<String>,

    /// Dataset for eight_point.
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,

    /// Use the built-in eight-point stand-in.
    #[arg(long)]
    pub synthetic: bool,
}
