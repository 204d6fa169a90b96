//! The installed binary: exit codes, determinism and JSON round trips.

use std::path::PathBuf;
use std::process::{Command, Output};

use coleman_gross::cli::{FrobeniusOutput, HeightOutput};

const BIN: &str = env!("CARGO_BIN_EXE_coleman-gross");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn job_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coleman-gross-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const GENUS_ONE_JOB: &str = r#"{
    "curve": "x^3 - 11*x + 15",
    "p": 7,
    "precision": 8,
    "divisor_y": [{"point": {"x": "2", "y": "1"}, "mult": 1}, {"point": {"x": "2", "y": "-1"}, "mult": -1}],
    "divisor_z": [{"point": {"x": "-1", "y": "5"}, "mult": 1}, {"point": {"x": "3", "y": "3"}, "mult": -1}],
    "W": "unit-root",
    "character": {"t": "1", "branch": "0"}
}"#;

#[test]
fn genus_one_job_succeeds_and_is_deterministic() {
    let path = job_file("g1.json", GENUS_ONE_JOB);
    let first = run(&["height", "--job", path.to_str().unwrap(), "--json"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let text = String::from_utf8(first.stdout.clone()).unwrap();
    assert!(text.contains("\"total\""));
    let second = run(&["height", "--job", path.to_str().unwrap(), "--json"]);
    assert_eq!(first.stdout, second.stdout);

    // parse and re-serialise byte for byte
    let parsed: HeightOutput = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
    // the echoed job reproduces the output
    let again = job_file("g1-echo.json", &serde_json::to_string(&parsed.job).unwrap());
    let third = run(&["height", "--job", again.to_str().unwrap(), "--json"]);
    assert_eq!(first.stdout, third.stdout);
    // contact at 3 contributes a local term
    assert!(parsed.height.local_terms.contains_key("3"));
}

#[test]
fn overlapping_supports_are_out_of_scope() {
    let body = GENUS_ONE_JOB.replace(r#"{"x": "-1", "y": "5"}"#, r#"{"x": "2", "y": "1"}"#);
    let path = job_file("overlap.json", &body);
    let out = run(&["height", "--job", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("OverlappingSupport"));
}

#[test]
fn contact_at_two_is_out_of_scope() {
    let out = run(&[
        "height", "--curve", "x^3 - x + 1", "--p", "7", "--prec", "6",
        "--divisor-y", r#"[{"point": "infinity", "mult": -1}, {"point": {"x": "1", "y": "1"}, "mult": 1}]"#,
        "--divisor-z", r#"[{"point": {"x": "3", "y": "5"}, "mult": 1}, {"point": {"x": "0", "y": "1"}, "mult": -1}]"#,
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BadPrimeContact"));
}

#[test]
fn malformed_json_exits_64() {
    let path = job_file("broken.json", "{\"curve\": ");
    assert_eq!(run(&["height", "--job", path.to_str().unwrap()]).status.code(), Some(64));
    let path = job_file("unknown.json", &GENUS_ONE_JOB.replace("\"W\"", "\"V\""));
    assert_eq!(run(&["height", "--job", path.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn check_suites_via_cli() {
    let weil = run(&["check", "--suite", "weil", "--p", "5"]);
    assert_eq!(weil.status.code(), Some(0), "{}", String::from_utf8_lossy(&weil.stdout));
    let rec = run(&["check", "--suite", "reciprocity", "--seed", "7", "--p", "11", "--instances", "3", "--json"]);
    assert_eq!(rec.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&rec.stdout).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    assert_eq!(run(&["check", "--suite", "nonsense"]).status.code(), Some(64));
}

#[test]
fn frobenius_json_matches_point_counts() {
    let out = run(&["frobenius", "--curve", "x^5 - 5*x^3 + 4*x + 1", "--p", "7", "--prec", "6", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let f: FrobeniusOutput = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(f.char_poly, ["49", "42", "22", "6", "1"]);
    assert!(f.weil_bounds && f.ordinary);
}

#[test]
fn integrate_between_points() {
    let out = run(&["integrate", "--curve", "x^3 + 1", "--p", "7", "--from", "infinity", "--to", "2,3", "--basis", "0"]);
    assert_eq!(out.status.code(), Some(0));
    // (2, 3) is torsion, so the holomorphic integral vanishes
    assert!(String::from_utf8_lossy(&out.stdout).contains("= O(7^"), "{}", String::from_utf8_lossy(&out.stdout));
}
