mod args;
mod commands;
mod settings;

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use prdepth::roblab::{PlotLine, PlotPoint};
use serde::Serialize;
use serde_json::Value;

use args::Cli;
use commands::Outcome;
use settings::{CliError, CliResult, Settings};

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a Value,
    seed: u64,
    version: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

#[derive(Serialize)]
struct Report<'a> {
    manifest: Manifest<'a>,
    estimates: &'a Value,
    diagnostics: &'a Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let result = std::panic::catch_unwind(|| execute(&cli))
        .unwrap_or_else(|_| Err(CliError::Internal("unexpected panic".into())));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> CliResult<()> {
    let settings = Settings::load(cli.config.as_deref())?;
    let seed = settings.value_or("seed", cli.seed, 0)?;
    let threads = settings.value("threads", cli.threads)?;
    let out = settings.path("out", cli.out.clone());
    let plot_dir = settings.path("plot-data", cli.plot_data.clone());
    let timing = settings.switch("timing", cli.timing)?;
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::invalid("threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }

    let started = Instant::now();
    let outcome = commands::run(&cli.command, &settings, seed)?;
    let elapsed = started.elapsed().as_secs_f64();
    settings.finish()?;

    print!("{}", outcome.table);
    let command = commands::name(&cli.command);
    if let Some(path) = out {
        let report = Report {
            manifest: Manifest {
                command,
                config: &outcome.config,
                seed,
                version: prdepth::VERSION,
                wall_time_s: timing.then_some(elapsed),
            },
            estimates: &outcome.estimates,
            diagnostics: &outcome.diagnostics,
        };
        let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
        text.push('\n');
        write(&path, &text)?;
    }
    if let Some(dir) = plot_dir {
        write_plot(&dir, &outcome)?;
    }
    if timing {
        eprintln!("wall time {elapsed:.3} s");
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_plot(dir: &Path, outcome: &Outcome) -> CliResult<()> {
    let (points, lines) = outcome
        .plot
        .as_ref()
        .ok_or_else(|| CliError::invalid("plot data needs a simple regression with an intercept"))?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    write(&dir.join("points.csv"), &points_csv(points))?;
    write(&dir.join("lines.csv"), &lines_csv(lines))
}

fn points_csv(points: &[PlotPoint]) -> String {
    let mut s = String::from("x,y,label\n");
    for p in points {
        let _ = writeln!(s, "{},{},{}", p.x, p.y, p.label);
    }
    s
}

fn lines_csv(lines: &[PlotLine]) -> String {
    let mut s = String::from("slope,intercept,label\n");
    for l in lines {
        let _ = writeln!(s, "{},{},{}", l.slope, l.intercept, l.label);
    }
    s
}
