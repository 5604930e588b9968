//! Exit codes and JSON output of the `symcross` binary.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcross"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn sympow_reports_dimension_and_blocks() {
    let v = json(&["sympow", "--blocks", "2", "--n", "2"]);
    assert_eq!(v["dimension"], 10);
    assert_eq!(v["block_dims"], serde_json::json!([3, 1]));
    assert_eq!(v["binomial_check"], true);

    let v = json(&["sympow", "--blocks", "1,1,1", "--n", "2"]);
    assert_eq!(v["dimension"], 6);
    assert_eq!(v["block_dims"], serde_json::json!([1, 1, 1, 1, 1, 1]));

    let v = json(&["sympow", "--blocks", "2,3", "--n", "2"]);
    assert_eq!(v["dimension"], 91);
}

#[test]
fn classify_lists_descriptors() {
    let v = json(&["classify", "--blocks", "2,3", "--n", "2"]);
    let mut dims: Vec<u64> = v["descriptors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["dim"].as_u64().unwrap())
        .collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![1, 3, 3, 6, 6]);
    assert_eq!(v["sum_of_squares"], 91);
    for d in v["descriptors"].as_array().unwrap() {
        let keys: Vec<&str> = d.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, vec!["blocks", "dim", "lambdas", "q"]);
    }

    // n = 1: one descriptor per block, of the block size
    let v = json(&["classify", "--blocks", "2,3", "--n", "1"]);
    let dims: Vec<u64> = v["descriptors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 3]);

    let v = json(&["classify", "--blocks", "2", "--n", "3", "--crosscheck"]);
    assert_eq!(v["crosscheck"]["result"], "PASS");
}

#[test]
fn spec_files_are_accepted() {
    let dir = std::env::temp_dir().join(format!("symcross-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, r#"{{"algebra": {{"blocks": [2]}}, "n": 2}}"#).unwrap();
    let v = json(&["sympow", "--spec", path.to_str().unwrap()]);
    assert_eq!(v["dimension"], 10);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn commands_pass_on_small_inputs() {
    assert_eq!(json(&["crossed", "--blocks", "1,2", "--n", "2"])["passed"], true);
    assert_eq!(
        json(&["induce", "--blocks", "2,1", "--n", "3", "--young", "2,1", "--block", "0,0,1"])["passed"],
        true
    );
    let v = json(&["schur-weyl", "--blocks", "3", "--lambda", "2,1"]);
    assert_eq!(v["dim"], 8);
    assert_eq!(v["equivalent_to_realization"], true);
    assert_eq!(json(&["homog", "--blocks", "2", "--degrees", "1,2"])["passed"], true);
}

#[test]
fn tables_show_the_json_numbers() {
    let table = String::from_utf8(run(&["sympow", "--blocks", "2,3", "--n", "2"]).stdout).unwrap();
    let v = json(&["sympow", "--blocks", "2,3", "--n", "2"]);
    assert!(table
        .lines()
        .any(|l| l.starts_with("dimension") && l.ends_with(&v["dimension"].to_string())));
    assert!(table.contains("[6,6,3,3,1]"));
}

#[test]
fn verify_prints_one_line_per_assertion() {
    let out = run(&["verify", "dimensions"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS [dimensions]")).count() >= 15);
    assert!(text.ends_with("PASS: dimensions\n"));
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(run(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frob"]).status.code(), Some(2));
    assert_eq!(run(&["sympow", "--blocks", "2,x", "--n", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["sympow", "--spec", "/nonexistent/spec.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["--budget", "10", "sympow", "--blocks", "2,3", "--n", "3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["homog", "--blocks", "2", "--degrees", "1,3", "--n-max", "2"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(run(&["--tol", "-1", "verify", "dimensions"]).status.code(), Some(2));
}
