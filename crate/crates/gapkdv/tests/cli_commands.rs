//! The `gapkdv` binary end to end: artifacts, formats and exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gapkdv-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], out: &Path) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_gapkdv"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
        .status
        .code()
        .expect("exit code")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn geometry_writes_comb_parameters() {
    let out = scratch_dir("geometry");
    assert_eq!(run(&["geometry"], &out), 0);
    let g = read_json(&out.join("geometry.json"));
    assert_eq!(g["critical_points"].as_array().unwrap().len(), 1);
    let w = g["harmonic_measures_at_minus_one"].as_array().unwrap();
    assert!((w[0].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(g["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn potential_csv_round_trips_and_matches_the_trace_formula() {
    let out = scratch_dir("potential");
    let cfg = out.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"gaps": [[1.0, 2.0], [3.0, 4.5]], "divisor": [{"lambda": 1.3, "eps": 1}, {"lambda": 3.9, "eps": -1}],
            "x": {"min": 0.0, "max": 1.0, "count": 5}, "t": {"min": 0.0, "max": 0.2, "count": 3}}"#,
    )
    .unwrap();
    assert_eq!(run(&["potential", "--config", cfg.to_str().unwrap()], &out), 0);
    let csv = std::fs::read_to_string(out.join("potential.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 15);
    // V(0, 0) = Σ(aⱼ + bⱼ − 2λⱼ) = (3 − 2.6) + (7.5 − 7.8).
    assert!((rows[0][2] - 0.1).abs() < 1e-12, "{}", rows[0][2]);
    let side = read_json(&out.join("potential.json"));
    assert_eq!(side["partial"], false);
    assert_eq!(side["lattice"].as_array().unwrap().len(), 15);
}

#[test]
fn verify_passes_on_defaults_with_a_record_per_check() {
    let out = scratch_dir("verify");
    assert_eq!(run(&["verify", "--seed", "3"], &out), 0);
    let report = read_json(&out.join("verify.json"));
    assert_eq!(report["pass"], true);
    let records = report["records"].as_array().unwrap();
    assert!(records.len() >= 20);
    assert!(records.iter().all(|r| r["residual"].as_f64().unwrap().is_finite()));
    assert!(report.get("timestamp").is_none());
}

#[test]
fn converge_reports_shrinking_differences() {
    let out = scratch_dir("converge");
    assert_eq!(run(&["converge"], &out), 0);
    let c = read_json(&out.join("converge.json"));
    assert_eq!(c["contracts"], true);
    assert!(std::fs::read_to_string(out.join("converge.csv"))
        .unwrap()
        .starts_with("level,difference,ratio"));
}

#[test]
fn invalid_inputs_exit_with_one() {
    let out = scratch_dir("invalid");
    let cfg = out.join("bad.json");
    for bad in [r#"{"gaps": [[2.0, 1.0]]}"#, r#"{"gapz": []}"#, r#"{"k": 9}"#, "not json"] {
        std::fs::write(&cfg, bad).unwrap();
        assert_eq!(run(&["geometry", "--config", cfg.to_str().unwrap()], &out), 1, "{bad}");
    }
    assert_eq!(run(&["geometry", "--tol=-1"], &out), 1);
    assert_eq!(run(&["geometry", "--tol", "2"], &out), 1);
    assert_eq!(run(&["geometry", "--no-such-flag"], &out), 1);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = scratch_dir("repeat-a");
    let b = scratch_dir("repeat-b");
    assert_eq!(run(&["geometry"], &a), 0);
    assert_eq!(run(&["geometry"], &b), 0);
    assert_eq!(
        std::fs::read(a.join("geometry.json")).unwrap(),
        std::fs::read(b.join("geometry.json")).unwrap()
    );
}
