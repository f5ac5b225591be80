use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cycle-sieve"));
    cmd.env_remove("CYCLE_SIEVE_BUDGET");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn spec(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("specs")
        .join(name)
        .display()
        .to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn zeta_of_the_plane() {
    let out = run(&["zeta", "--pn", "2", "--s", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("{\n  \"value_num\": 21,\n  \"value_den\": 64"), "{text}");
    let v = json(&out);
    assert_eq!(v["tool"], "cycle-sieve");
    assert_eq!(v["config"]["command"]["name"], "zeta");
}

#[test]
fn density_of_binary_forms() {
    let v = json(&run(&["density", "--n", "1", "--d", "10"]));
    assert_eq!(v["empirical_exact"]["num"].to_string(), "3");
    assert_eq!(v["empirical_exact"]["den"].to_string(), "8");
    assert_eq!(v["predicted_limit"]["num"].to_string(), "3");
}

#[test]
fn small_degree_check_reports_equality() {
    let v = json(&run(&["small-degree-check", "--spec", &spec("avoid_point.spec"), "--d", "5", "--r", "1"]));
    assert_eq!(v["equal"], true);
    assert_eq!(v["lhs"]["num"].to_string(), "117649");
    assert_eq!(v["lhs"]["den"].to_string(), "524288");
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("count.json");
    let out = run(&["count", "--n", "2", "--r", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v.is_object());
}

#[test]
fn tail_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tail.json");
    let out = run(&["tail", "--n", "1", "--d", "8", "--r-values", "1,2,3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(path.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("d,r,count,total,fraction"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn invalid_input_exits_3() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["density", "--p", "4", "--n", "1", "--d", "3"]).status.code(), Some(3));
    assert_eq!(run(&["density", "--n", "1"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "/nonexistent/cert.json"]).status.code(), Some(3));
    let out = run(&["smooth-cycle", "--spec", &spec("nodal_cubic_f3.spec"), "--d-max", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.spec");
    std::fs::write(&bad, "2 1 2\n[Z]\ngen: x0 +* x1\n").unwrap();
    let out = run(&["containment", "--spec", bad.to_str().unwrap(), "--d", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn help_exits_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn exhausted_budget_or_search_exits_2() {
    let out = run(&["density", "--n", "2", "--d", "5", "--budget-space", "1024"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["density", "--n", "2", "--d", "5"])
        .env("CYCLE_SIEVE_BUDGET", "space=1024")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["smooth-cycle", "--spec", &spec("two_lines_f2.spec"), "--d-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

fn smooth(dir: &Path) -> PathBuf {
    let cert = dir.join("cert.json");
    let out = run(&[
        "smooth-cycle",
        "--spec",
        &spec("nodal_cubic_f3.spec"),
        "--d-max",
        "4",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    cert
}

#[test]
fn certificate_verifies_and_tampering_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cert = smooth(dir.path());
    let out = run(&["verify", cert.to_str().unwrap(), "--r", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let clauses: Vec<&str> = v["log"]["clauses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["clause"].as_str().unwrap())
        .collect();
    for c in ["a", "b", "c", "d"] {
        assert!(clauses.contains(&c), "{clauses:?}");
    }

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["witness"]["beta"] = Value::String("x0 + x1".into());
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&["verify", tampered.to_str().unwrap(), "--r", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification failed"));
}
