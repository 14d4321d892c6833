use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walsh-decay")).args(args).output().expect("binary runs")
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("config.json");
    fs::write(
        &path,
        r#"{"max_level": 5, "corpus": [{"name": "exp"}, {"name": "monomial", "r": 3}],
            "bounds": [{"bound": "monomial"}, {"bound": "smooth_cr", "r": 2, "lambda": 1.0}],
            "gamma_level": 3,
            "lower_bound": {"a_max": 6, "max_nested": 1, "tails": [0]}}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_writes_report_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out = dir.path().join("out");
    let status = run(&["verify", "--config", &config, "--out", out.to_str().unwrap(), "--jobs", "2"]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.starts_with("function,params,b,k,v,mu_r,mu_r_per,coeff_re,coeff_im,coeff_abs,theorem,bound,ratio\n"));
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["violations"], 0);
    assert!(summary["limit_table"]["series"].is_array());
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out = dir.path().join("b3");
    let status = run(&["verify", "--config", &config, "--base", "3", "--max-level", "3", "--tol", "1e-6", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["base"], 3);
    assert_eq!(summary["max_level"], 3);
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("3")));
}

#[test]
fn coeff_prints_oracle_and_exact() {
    let status = run(&["coeff", "--function", "monomial:r=3", "--k", "5", "--base", "3"]);
    assert!(status.status.success());
    let text = String::from_utf8(status.stdout).unwrap();
    assert!(text.contains("oracle") && text.contains("recursion"), "{text}");
}

#[test]
fn lowerbound_and_bench_write_tables() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out = dir.path().join("lb");
    assert!(run(&["lowerbound", "--config", &config, "--out", out.to_str().unwrap()]).status.success());
    assert!(fs::read_to_string(out.join("limits.csv")).unwrap().lines().count() > 1);
    let path = dir.path().join("bench.json");
    fs::write(&path, r#"{"bench": {"sizes": [[2, 6], [3, 4]], "repeats": 1}}"#).unwrap();
    let out = dir.path().join("bench");
    assert!(run(&["bench", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.success());
    assert_eq!(fs::read_to_string(out.join("bench.csv")).unwrap().lines().count(), 3);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"bsae": 2}"#).unwrap();
    assert_eq!(run(&["verify", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--function", "nope", "--k", "1"]).status.code(), Some(2));
}
