//! End-to-end tests against the compiled binary: output shapes, flag
//! validation, exit codes, and the one-line error contract.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hiercon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

/// Asserts the rejected-input contract: exit 1, empty stdout, and exactly
/// one stderr line starting with `error:`.
fn assert_usage_error(args: &[&str]) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(1), "args: {args:?}");
    assert!(out.stdout.is_empty(), "stdout not empty for {args:?}");
    let err = stderr(&out);
    assert_eq!(err.trim_end().lines().count(), 1, "stderr not one line: {err:?}");
    assert!(err.starts_with("error: "), "stderr missing prefix: {err:?}");
}

#[test]
fn build_csv_is_row_stochastic() {
    let out = run(&["build", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        let sum: f64 = row.split(',').map(|c| c.parse::<f64>().unwrap()).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}

#[test]
fn build_json_describes_the_network() {
    let out = run(&[
        "build", "--layers", "3", "--breadth", "2", "--alpha", "0.5", "--beta", "2",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["n"], 21);
    assert_eq!(value["layers"], 3);
    assert_eq!(value["alpha"], 0.5);
    assert_eq!(value["rows"].as_array().unwrap().len(), 21);
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let args = ["build", "--layers", "2", "--breadth", "2", "--alpha", "1", "--beta", "3"];
    let piped = run(&args);
    let to_file = run(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), piped.stdout);
}

#[test]
fn rejected_flags_follow_the_error_contract() {
    // Unknown flag, bad value, bad shape, missing required flag.
    assert_usage_error(&["build", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1", "--bogus"]);
    assert_usage_error(&["build", "--layers", "two", "--breadth", "3", "--alpha", "1", "--beta", "1"]);
    assert_usage_error(&["build", "--layers", "1", "--breadth", "3", "--alpha", "1", "--beta", "1"]);
    assert_usage_error(&["build", "--layers", "2", "--breadth", "1", "--alpha", "1", "--beta", "1"]);
    assert_usage_error(&["build", "--layers", "2", "--breadth", "3", "--alpha", "-1", "--beta", "1"]);
    assert_usage_error(&["build", "--layers", "2"]);
    assert_usage_error(&["hocus"]);
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert!(help.status.success());
    assert!(stdout(&help).contains("build"));
    let version = run(&["--version"]);
    assert!(version.status.success());
    assert!(stdout(&version).contains("hiercon"));
}

#[test]
fn simulate_records_header_and_strided_steps() {
    let out = run(&[
        "simulate", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--t-end", "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x1,x2,x3,x4,x5,x6,x7,x8,x9,x10,x11,x12,x13,x14,x15,x16");
    // 200 steps recorded every 10th, plus the initial state.
    assert_eq!(lines.len(), 1 + 21);
    let last_t: f64 = lines[21].split(',').next().unwrap().parse().unwrap();
    assert!((last_t - 2.0).abs() < 1e-12);
}

#[test]
fn simulate_seeds_are_reproducible_and_distinct() {
    let args = |seed: &'static str| {
        [
            "simulate", "--layers", "2", "--breadth", "2", "--alpha", "1", "--beta", "1",
            "--t-end", "1", "--seed", seed,
        ]
    };
    let a = run(&args("7"));
    let b = run(&args("7"));
    let c = run(&args("8"));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn simulate_reads_initial_states_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x0.txt");
    let values: Vec<String> = (0..9).map(|k| format!("{}", 0.1 * k as f64)).collect();
    std::fs::write(&path, values.join("\n")).unwrap();

    let out = run(&[
        "simulate", "--layers", "2", "--breadth", "2", "--alpha", "1", "--beta", "1",
        "--t-end", "1", "--x0-file", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let first_row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(first_row[0], 0.0);
    let expected: Vec<f64> = (0..9).map(|k| 0.1 * k as f64).collect();
    assert_eq!(&first_row[1..], &expected[..]);

    // Wrong node count: rejected before any integration.
    assert_usage_error(&[
        "simulate", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--x0-file", path.to_str().unwrap(),
    ]);
}

#[test]
fn simulate_flag_rules() {
    assert_usage_error(&[
        "simulate", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--format", "json",
    ]);
    assert_usage_error(&[
        "simulate", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--gamma", "1",
    ]);
    assert_usage_error(&[
        "simulate", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--input-value", "1",
    ]);
    // Step above the stability bound: validation, not a numerical failure.
    assert_usage_error(&[
        "simulate", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--dt", "0.5",
    ]);
}

#[test]
fn spectrum_analytic_and_numeric_agree_on_the_gap() {
    let net = ["--layers", "2", "--breadth", "3", "--alpha", "2", "--beta", "0.5"];
    let analytic = run(&[&["spectrum"], &net[..], &["--analytic"]].concat());
    let numeric = run(&[&["spectrum"], &net[..], &["--numeric"]].concat());
    assert!(analytic.status.success() && numeric.status.success());

    let a: serde_json::Value = serde_json::from_str(&stdout(&analytic)).unwrap();
    let n: serde_json::Value = serde_json::from_str(&stdout(&numeric)).unwrap();
    assert_eq!(n["n"], 16);
    let eigenvalues = n["eigenvalues"].as_array().unwrap();
    assert_eq!(eigenvalues.len(), 16);
    // Sorted by descending real part: [0] is the consensus eigenvalue and
    // [1] the binding one, which the closed form names.
    assert!((eigenvalues[0]["re"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    let second = eigenvalues[1]["re"].as_f64().unwrap();
    let bound = a["lambda_b"].as_f64().unwrap().max(a["lambda_g"].as_f64().unwrap());
    assert!((second - bound).abs() < 1e-9);
}

#[test]
fn spectrum_flag_rules() {
    assert_usage_error(&[
        "spectrum", "--layers", "3", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--analytic",
    ]);
    assert_usage_error(&[
        "spectrum", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--format", "csv",
    ]);
    assert_usage_error(&[
        "spectrum", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--analytic", "--numeric",
    ]);
}

#[test]
fn rate_prints_the_reference_value() {
    let out = run(&["rate", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0.0428932\n");
}

#[test]
fn rate_formats_and_methods() {
    let net = ["--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1"];
    let csv = run(&[&["rate"], &net[..], &["--format", "csv"]].concat());
    assert!(stdout(&csv).starts_with("rate,method\n"));
    assert!(stdout(&csv).contains("analytic"));

    let json = run(&[&["rate"], &net[..], &["--format", "json"]].concat());
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(value["method"], "analytic");
    let analytic = value["rate"].as_f64().unwrap();

    let forced = run(&[&["rate"], &net[..], &["--force-numeric", "--format", "json"]].concat());
    let value: serde_json::Value = serde_json::from_str(&stdout(&forced)).unwrap();
    assert_eq!(value["method"], "numeric");
    assert!((value["rate"].as_f64().unwrap() - analytic).abs() < 1e-8);

    let driven = run(&[&["rate"], &net[..], &["--gamma-node", "5", "--format", "json"]].concat());
    let value: serde_json::Value = serde_json::from_str(&stdout(&driven)).unwrap();
    assert_eq!(value["method"], "numeric");
    assert_eq!(value["gamma"], 1.0);
    assert_eq!(value["input_node"], 5);
    assert!(value["rate"].as_f64().unwrap() > 0.0);

    assert_usage_error(&[&["rate"], &net[..], &["--gamma", "1"]].concat());
}

#[test]
fn sweep_default_grids_have_the_documented_shape() {
    let out = run(&["sweep", "--layers", "2", "--breadth", "3", "--mode", "autonomous"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 40);
    assert!(lines[0].starts_with("beta\\alpha,"));
    assert_eq!(lines[0].split(',').count(), 1 + 40);
    let first_alpha: f64 = lines[0].split(',').nth(1).unwrap().parse().unwrap();
    let last_alpha: f64 = lines[0].split(',').next_back().unwrap().parse().unwrap();
    assert_eq!((first_alpha, last_alpha), (0.1, 10.0));

    let region = run(&["sweep", "--layers", "2", "--breadth", "3", "--mode", "region"]);
    let text = stdout(&region);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 40);
    assert_eq!(lines[0].split(',').count(), 1 + 35);
    for line in &lines[1..] {
        for cell in line.split(',').skip(1) {
            let code: f64 = cell.parse().unwrap();
            assert!(code == -1.0 || code == 0.0 || code == 1.0);
        }
    }
}

#[test]
fn sweep_input_json_carries_the_input_description() {
    let out = run(&[
        "sweep", "--layers", "2", "--breadth", "3", "--mode", "input",
        "--alpha-grid", "0.5:2:3", "--beta-grid", "1:1:1", "--gamma", "0.5",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["kind"], "input_rate");
    assert_eq!(value["gamma"], 0.5);
    assert_eq!(value["input_node"], 5);
    let row = value["values"][0].as_array().unwrap();
    assert_eq!(row.len(), 3);
    assert!(row.iter().all(|v| v.as_f64().unwrap() > 0.0));
}

#[test]
fn sweep_tradeoff_flags_one_argmax_per_column() {
    let out = run(&[
        "sweep", "--layers", "2", "--breadth", "3", "--mode", "tradeoff",
        "--beta", "1", "--alpha-grid", "0.1:10:7", "--log-spacing",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,autonomous_rate,input_rate,autonomous_argmax,input_argmax");
    assert_eq!(lines.len(), 8);
    let column_ones = |idx: usize| {
        lines[1..]
            .iter()
            .filter(|l| l.split(',').nth(idx).unwrap() == "1")
            .count()
    };
    assert_eq!(column_ones(3), 1);
    assert_eq!(column_ones(4), 1);
}

#[test]
fn sweep_flag_rules() {
    let base = ["sweep", "--layers", "2", "--breadth", "3"];
    assert_usage_error(&[&base[..], &["--mode", "tradeoff"]].concat());
    assert_usage_error(&[&base[..], &["--mode", "tradeoff", "--beta", "1", "--beta-grid", "1:2:3"]].concat());
    assert_usage_error(&[&base[..], &["--mode", "autonomous", "--beta", "1"]].concat());
    assert_usage_error(&[&base[..], &["--mode", "autonomous", "--gamma", "1"]].concat());
    assert_usage_error(&[&base[..], &["--mode", "region", "--gamma", "1"]].concat());
    assert_usage_error(&[&base[..], &["--mode", "autonomous", "--alpha-grid", "5:1:3"]].concat());
    assert_usage_error(&[&base[..], &["--mode", "autonomous", "--alpha-grid", "-1:1:3", "--log-spacing"]].concat());
    // Region classification has no closed form beyond two layers.
    assert_usage_error(&["sweep", "--layers", "3", "--breadth", "3", "--mode", "region"]);
    assert_usage_error(&["sweep", "--layers", "3", "--breadth", "3", "--mode", "tradeoff", "--beta", "1"]);
}

#[test]
fn verify_reports_every_check() {
    let out = run(&["verify", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("configuration layers=2 breadth=3"));
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), 14);
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("14 checks passed"));

    // Deeper networks keep the structural checks only.
    let deep = run(&["verify", "--layers", "4", "--breadth", "2", "--alpha", "0.7", "--beta", "1.3"]);
    assert!(deep.status.success());
    assert!(stdout(&deep).trim_end().ends_with("5 checks passed"));
}

#[test]
fn verify_tolerance_scale_is_validated() {
    assert_usage_error(&[
        "verify", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--tolerance-scale", "0",
    ]);
    assert_usage_error(&[
        "verify", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1",
        "--tolerance-scale", "-2",
    ]);
}

#[test]
fn verify_failures_exit_with_the_numerical_code() {
    // Shrinking tolerances ten orders turns rounding noise into failures;
    // the report still prints, the exit code switches to 2.
    let out = run(&[
        "verify", "--layers", "2", "--breadth", "5", "--alpha", "3.7", "--beta", "0.21",
        "--tolerance-scale", "1e-10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("FAIL"));
    let err = stderr(&out);
    assert!(err.starts_with("error: verification failed:"));
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn closed_stdout_is_not_an_error() {
    // `hiercon ... | head` closes the pipe early; the tool must neither
    // panic nor report a failure. The reader end is dropped before the
    // child runs, so every write sees EPIPE.
    for args in [
        vec!["build", "--layers", "4", "--breadth", "4", "--alpha", "1", "--beta", "1"],
        vec!["--help"],
    ] {
        let (reader, writer) = std::io::pipe().expect("pipe");
        drop(reader);
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_hiercon"))
            .args(&args)
            .stdout(writer)
            .stderr(std::process::Stdio::piped())
            .output()
            .expect("spawn hiercon");
        assert!(out.status.success(), "args {args:?}: {:?}", out.status);
        assert!(out.stderr.is_empty(), "args {args:?}: {:?}", String::from_utf8_lossy(&out.stderr));
    }
}
