use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prdepth"))
}

fn eight_point() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/eight_point_synthetic.csv")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn fit_prints_all_estimators() {
    let data = eight_point();
    let out = run(&["fit", "--data", data.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let table = String::from_utf8(out.stdout).unwrap();
    for name in ["prd", "rd", "ls"] {
        assert!(table.lines().any(|l| l.starts_with(name)), "{table}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["fit", "--data", "/nonexistent/data.csv"])), 2);
    assert_eq!(code(&run(&["fit", "--bogus"])), 3);

    let bad = write(dir.path(), "bad.csv", "y,x1\n1,oops\n");
    assert_eq!(code(&run(&["fit", "--data", &bad])), 3);

    let flat = write(dir.path(), "flat.csv", "y,x1\n1,1\n1,2\n1,3\n1,4\n");
    assert_eq!(code(&run(&["depth", "--data", &flat, "--beta", "0,1"])), 4);

    let wide = write(dir.path(), "wide.csv", "y,x1,x2\n1,2,3\n2,1,0\n0,5,1\n4,4,2\n3,0,1\n");
    assert_eq!(code(&run(&["fit", "--data", &wide, "--estimator", "rd"])), 3);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let data = eight_point();
    let report = |name: &str, extra: &[&str]| {
        let path = dir.path().join(name);
        let mut args = vec!["fit", "--data", data.to_str().unwrap(), "--seed", "11", "--out", path.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(code(&run(&args)), 0);
        std::fs::read(path).unwrap()
    };
    let a = report("a.json", &[]);
    assert_eq!(a, report("b.json", &[]));
    assert_eq!(a, report("c.json", &["--threads", "3"]));

    let json: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(json["manifest"]["seed"], 11);
    assert_eq!(json["manifest"]["command"], "fit");
    assert!(json["manifest"].get("wall_time_s").is_none());
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let data = eight_point();
    let config = write(dir.path(), "run.conf", "# demo\nseed = 5\nn_dir = 40\n");
    let json = |extra: &[&str]| {
        let path = dir.path().join("r.json");
        let mut args = vec!["depth", "--data", data.to_str().unwrap(), "--beta", "0,0.1", "--config", &config];
        args.extend_from_slice(&["--out", path.to_str().unwrap()]);
        args.extend_from_slice(extra);
        let out = run(&args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice::<serde_json::Value>(&std::fs::read(path).unwrap()).unwrap()
    };
    let from_file = json(&[]);
    assert_eq!(from_file["manifest"]["seed"], 5);
    assert_eq!(from_file["manifest"]["config"]["n_dir"], 40);
    let overridden = json(&["--seed", "6", "--n-dir", "50"]);
    assert_eq!(overridden["manifest"]["seed"], 6);
    assert_eq!(overridden["manifest"]["config"]["n_dir"], 50);

    let unknown = write(dir.path(), "bad.conf", "colour = blue\n");
    assert_eq!(code(&run(&["fit", "--data", data.to_str().unwrap(), "--config", &unknown])), 3);
    let unused = write(dir.path(), "unused.conf", "y0 = 3\n");
    assert_eq!(code(&run(&["fit", "--data", data.to_str().unwrap(), "--config", &unused])), 3);
}

#[test]
fn plot_data_files() {
    let dir = tempfile::tempdir().unwrap();
    let plots = dir.path().join("plots");
    let out = run(&["demo", "--scenario", "eight_point", "--synthetic", "--plot-data", plots.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let points = std::fs::read_to_string(plots.join("points.csv")).unwrap();
    let lines = std::fs::read_to_string(plots.join("lines.csv")).unwrap();
    assert!(points.starts_with("x,y,label\n"));
    assert_eq!(points.lines().count(), 1 + 16);
    assert!(points.contains("contaminated:outlier"));
    assert!(lines.starts_with("slope,intercept,label\n"));
    for label in ["clean:ls", "clean:prd", "contaminated:rd"] {
        assert!(lines.contains(label), "{lines}");
    }
}

#[test]
fn eight_point_needs_data() {
    assert_eq!(code(&run(&["demo", "--scenario", "eight_point"])), 3);
}
