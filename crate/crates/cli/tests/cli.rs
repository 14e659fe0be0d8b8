use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const D2: &str = "states 3\nalphabet a b c\ninitial 0\nfinal 2\ntrans a 1 0 2\ntrans b 0 0 2\ntrans c 0 2 2\n";

fn synideal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synideal")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
}

#[test]
fn witness_two_sided_3_text() {
    let o = synideal(&["witness", "--class", "two-sided", "--n", "3", "--format", "text"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("trans a 1 2 2"));
    assert!(s.contains("trans b 0 0 2"));
    assert!(s.contains("trans c 0 1 2"));
}

#[test]
fn analyze_three_state_example() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d2.dfa", D2);
    let o = synideal(&["analyze", &f]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "sigma"), Some("9"));
}

#[test]
fn bounds_left() {
    let o = synideal(&["bounds", "--class", "left", "--n-max", "6"]);
    let values: Vec<String> = stdout(&o).lines().map(|l| l.split(' ').nth(1).unwrap().to_string()).collect();
    assert_eq!(values, ["1", "3", "11", "67", "629", "7781"]);
}

#[test]
fn analyze_witness_output_meets_bound() {
    let dir = TempDir::new().unwrap();
    for class in ["right", "left", "two-sided"] {
        let lo = if class == "two-sided" { 2 } else { 1 };
        for n in lo..=6 {
            let w = synideal(&["witness", "--class", class, "--n", &n.to_string()]);
            let f = write(&dir, "w.dfa", &stdout(&w));
            let o = synideal(&["analyze", &f]);
            assert_eq!(field(&stdout(&o), "bound_met"), Some("true"), "{class} n={n}");
        }
    }
}

#[test]
fn json_flag_switches_output() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d2.dfa", D2);
    let o = synideal(&["--json", "semigroup", &f, "--list"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 9);
    assert_eq!(v["elements"].as_array().unwrap().len(), 9);
    let o = synideal(&["--json", "analyze", &f]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sigma"], 9);
}

#[test]
fn identical_invocations_identical_bytes() {
    let a = synideal(&["--threads", "1", "enumerate", "--n", "3", "-k", "2", "--class", "left", "--sample", "20", "--seed", "7"]);
    let b = synideal(&["--threads", "3", "enumerate", "--n", "3", "-k", "2", "--class", "left", "--sample", "20", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_injection_and_classify() {
    let dir = TempDir::new().unwrap();
    let w = synideal(&["witness", "--class", "left", "--n", "4"]);
    let f = write(&dir, "w.dfa", &stdout(&w));
    let o = synideal(&["verify-injection", &f]);
    assert_eq!(o.status.code(), Some(0));
    let o = synideal(&["classify", &f]);
    assert_eq!(field(&stdout(&o), "left"), Some("true"));
    assert_eq!(field(&stdout(&o), "right"), Some("false"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d2.dfa", D2);
    assert_eq!(synideal(&["semigroup", &f, "--cap", "3"]).status.code(), Some(3));
    assert_eq!(synideal(&["enumerate", "--n", "3", "-k", "4", "--budget", "10"]).status.code(), Some(3));
    assert_eq!(synideal(&["analyze", "/definitely/missing.dfa"]).status.code(), Some(2));
    let bad = write(&dir, "bad.dfa", "states 2\nalphabet a\ninitial 0\ntrans a 0 5\n");
    assert_eq!(synideal(&["analyze", &bad]).status.code(), Some(2));
    assert_eq!(synideal(&["witness", "--class", "sideways", "--n", "3"]).status.code(), Some(2));
    assert_eq!(synideal(&["verify-injection", &f]).status.code(), Some(2));
}

#[test]
fn export_dot() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d2.dfa", D2);
    let o = synideal(&["export-dot", &f]);
    assert!(stdout(&o).starts_with("digraph"));
    assert!(Path::new(&f).exists());
}
