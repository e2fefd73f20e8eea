use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hallforge")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, val: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hallforge")).args(args).env(key, val).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn build_kronecker_dup() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["build", "--algebra", "builtin:kronecker-dup", "--field", "2", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dim 12, 4 vertices"), "{}", stdout(&o));
    let dot = fs::read_to_string(dir.path().join("quiver.dot")).unwrap();
    let vertices = dot.lines().filter(|l| l.trim_end().ends_with("\";") && !l.contains("->")).count();
    assert_eq!(vertices, 4);
    assert_eq!(dot.matches("->").count(), 6);
    let alg = read_json(&dir.path().join("algebra.json"));
    assert_eq!(alg["labels"].as_array().unwrap().len(), 12);

    // the written table loads back
    let again = dir.path().join("again");
    let path = dir.path().join("algebra.json");
    let o = run(&["build", "--algebra", path.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(again.join("quiver.dot")).unwrap().matches("->").count(), 6);
}

#[test]
fn build_d4tilde_dup() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["build", "--algebra", "builtin:d4tilde-dup", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("10 vertices"));
}

#[test]
fn malformed_algebra_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"kind\": ").unwrap();
    let o = run(&["build", "--algebra", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["build", "--algebra", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hall_counts() {
    let o = run(&["hall", "--m", "S1+S1", "--n", "S1", "--l", "S1", "--field", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "4");
    let o = run(&["hall", "--m", "S1", "--n", "S1", "--l", "S2", "--field", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn hall_product_with_cross_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "hall", "--product", "--x", "S2", "--y", "S1", "--field", "2", "--riedtmann", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = read_json(&dir.path().join("hall.json"));
    let terms = v["product"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 4);
    assert!(terms.iter().all(|t| t["coeff"] == 1));
    assert!(v["riedtmann"]["rows"].as_array().unwrap().iter().all(|r| r["agree"] == true));
}

#[test]
fn cap_exceeded_exit_code() {
    let o = run(&["hall", "--product", "--x", "S2", "--y", "S1", "--field", "2", "--cap-cocycles", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_suite() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "nosuch", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--suite", "assoc", "--field", "6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn skew_identity_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "verify", "--suite", "skew-identities", "--algebra", "builtin:kronecker-dup", "--field", "2,3", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = read_json(&dir.path().join("report.json"));
    assert_eq!(r["passed"], true);
    assert_eq!(r["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn nested_bracket_reports_its_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "nested-bracket", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = read_json(&dir.path().join("report.json"));
    assert_eq!(r["first_failure"], 0);
    let terms = r["checks"][0]["detail"]["bracket"].as_array().unwrap();
    let p1 = terms.iter().find(|t| t["class"] == "P1'").unwrap();
    assert_eq!(p1["at_one"], -2);
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["verify", "--suite", "assoc", "--seed", "7", "--format", "csv", "--out", d.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ra = fs::read(a.path().join("report.json")).unwrap();
    assert_eq!(ra, fs::read(b.path().join("report.json")).unwrap());
    let csv = fs::read_to_string(a.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
}

#[test]
fn interpolation_certificate_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("out");
    let args = ["interpolate", "--algebra", "builtin:kronecker", "--x", "S1", "--y", "S1", "--m", "S1+S1", "--out", out.to_str().unwrap()];
    let o = run_env(&args, "HALLFORGE_CACHE", &cache);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "g = x + 1");
    let cert = read_json(&out.join("certificates").join("S1_S1_S1_plus_S1.json"));
    assert_eq!(cert["status"], "certified");
    assert_eq!(cert["poly"], serde_json::json!([1, 1]));
    let cached: Vec<_> = fs::read_dir(&cache).unwrap().collect();
    assert_eq!(cached.len(), 1);
    let o = run_env(&args, "HALLFORGE_CACHE", &cache);
    assert_eq!(stdout(&o).trim(), "g = x + 1");
}

#[test]
fn bracket_of_simples() {
    let o = run(&["bracket", "--algebra", "builtin:kronecker", "--x", "S2", "--y", "S1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("u[M0]") && s.contains("u[Minf]"), "{s}");
}
