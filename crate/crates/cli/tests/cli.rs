use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgbundle")).args(args).output().expect("binary runs")
}

fn golden() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/flat_sasaki_seed42.json")).unwrap()
}

#[test]
fn flat_sasaki_report_matches_golden() {
    let out =
        run(&["verify", "--base", "euclidean", "--dim", "2", "--radius", "1.0", "--samples", "10", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden());
}

#[test]
fn config_file_and_flags_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "base = \"euclidean\"\nn = 2\nradius = 1.0\nsamples = 10\nseed = 42\n").unwrap();
    let report = dir.path().join("out.json");
    let out = run(&["verify", "--config", cfg.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(report).unwrap(), golden());
}

#[test]
fn failing_check_exits_one_and_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.toml");
    std::fs::write(
        &cfg,
        "samples = 2\nsuites = [\"structures\"]\n[tolerances]\n\"structures.perturbed_product\" = 10.0\n",
    )
    .unwrap();
    let out = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("structures.perturbed_product"), "{err}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "n = 2\nradius = = 1\n").unwrap();
    let out = run(&["verify", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let weights = dir.path().join("weights.toml");
    std::fs::write(&weights, "params = { a = [1.0], b = [-2.0] }\n").unwrap();
    let out = run(&["verify", "--config", weights.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a + b*tau > 0"));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_three() {
    let out = run(&["verify", "--samples", "1", "--suite", "base", "--out", "/nonexistent-dir/report.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn defect_csv_covers_the_grid() {
    let out = run(&["defect", "--samples", "2", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,block,max_defect"));
    let maxima: Vec<f64> = lines
        .filter(|l| l.split(',').nth(1) == Some("max"))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(maxima.len(), 202);
    assert!(maxima.iter().all(|m| *m > 1e-3));
}

#[test]
fn curvature_csv_has_one_row_per_sample() {
    let out = run(&["curvature", "--samples", "3", "--base", "constant-curvature", "--curvature", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("sample,plane,curvature"));
    assert_eq!(text.lines().count(), 4);
}
