use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_convalg"));
    c.env_remove("CONVALG_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fixture(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn assoc() -> PathBuf {
    fixture(
        "assoc.json",
        r#"{"lhs": "(op * x (op * y z))", "rhs": "(op * (op * x y) z)"}"#,
    )
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn eq_check(lattice: &str, extra: &[&str]) -> Output {
    let eq = assoc();
    let mut args = vec![
        "eq",
        "check",
        "--lattice",
        lattice,
        "--structure",
        "Z2",
        "--eq",
        eq.to_str().unwrap(),
        "--mode",
    ];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn associativity_chain3_valid() {
    let out = eq_check("chain3", &["exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["verdict"]["status"], "valid_exhaustive");
    assert_eq!(v["verdict"]["assignments_tried"], 729);
}

#[test]
fn associativity_n5_counterexample() {
    let out = eq_check("N5", &["exhaustive"]);
    assert_eq!(out.status.code(), Some(1));
    let v = &json_lines(&out)[0];
    assert_eq!(v["verdict"]["status"], "counterexample");
    let a = v["verdict"]["assignment"].as_object().unwrap();
    assert_eq!(a.len(), 3);
    assert_ne!(v["verdict"]["lhs"], v["verdict"]["rhs"]);
}

#[test]
fn identical_invocations_give_identical_output() {
    let a = eq_check("catalog:M3", &["sample", "--seed", "7", "--samples", "50"]);
    let b = eq_check("catalog:M3", &["sample", "--seed", "7", "--samples", "50"]);
    assert_eq!(a.stdout, b.stdout);
    let s1 = run(&["suite", "run", "z2-associativity"]);
    let s2 = run(&["suite", "run", "z2-associativity"]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn budget_environment_variable() {
    let eq = assoc();
    let args = ["eq", "check", "--lattice", "chain3", "--structure", "Z2", "--eq", eq.to_str().unwrap(), "--mode"];
    let out = bin().args(args).arg("exhaustive").env("CONVALG_BUDGET", "100").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    let out = bin().args(args).arg("auto").env("CONVALG_BUDGET", "100").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["verdict"]["status"], "valid_sampled");

    let out = bin().args(args).args(["exhaustive", "--budget", "1000"]).env("CONVALG_BUDGET", "100").output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = bin().args(args).arg("auto").env("CONVALG_BUDGET", "lots").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn documents_are_validated() {
    let good = fixture(
        "diamond.json",
        r#"{"labels": ["0", "a", "b", "1"], "leq": [["0","a"], ["0","b"], ["a","1"], ["b","1"]]}"#,
    );
    let out = run(&["lattice", "check", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["boolean"], true);

    let bad = fixture("vee.json", r#"{"labels": ["a", "b", "1"], "leq": [["a","1"], ["b","1"]]}"#);
    assert_eq!(run(&["lattice", "check", bad.to_str().unwrap()]).status.code(), Some(2));

    let frame = fixture(
        "frame.json",
        r#"{"carrier": 2, "relations": [{"name": "f", "arity": 1, "mode": "join", "tuples": [[0, 1]]}]}"#,
    );
    let out = run(&["structure", "check", frame.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_lines(&out)[0]["carrier"], 2);

    let out_of_range = fixture(
        "frame_bad.json",
        r#"{"carrier": 2, "relations": [{"name": "f", "arity": 1, "mode": "join", "tuples": [[0, 5]]}]}"#,
    );
    assert_eq!(run(&["structure", "check", out_of_range.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["lattice", "check", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn catalog_list_lines() {
    let out = run(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    for v in json_lines(&out) {
        assert!(v["name"].is_string() && v["kind"].is_string() && v.get("params").is_some());
    }
}

#[test]
fn paper_core_suite() {
    let out = run(&["suite", "run", "paper-core"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines = json_lines(&out);
    let summary = lines.last().unwrap();
    assert_eq!(summary["suite"], "paper-core");
    assert_eq!(summary["status"], "pass");
    let criteria: Vec<u64> = lines
        .iter()
        .filter_map(|l| l.get("criterion").and_then(Value::as_u64))
        .collect();
    assert_eq!(criteria, (1..=12).collect::<Vec<_>>());
    assert!(lines.iter().filter(|l| l.get("checker").is_some()).count() > 100);
}
