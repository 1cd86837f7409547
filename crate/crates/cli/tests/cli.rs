use std::process::{Command, Output};

use serde_json::Value;

fn hcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcalc")).args(args).output().expect("run hcalc")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn case<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["cases"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no case {name}"))
}

#[test]
fn fourier_pair_single_omega() {
    let o = hcalc(&["run", "--suite", "fourier-pair", "--omega", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["suite"], "fourier-pair");
    assert_eq!(r["pass"], true);
    assert!(case(&r, "fourier pair omega=1 (max error)")["value"].as_f64().unwrap() < 1e-6);
    assert_eq!(r["cases"].as_array().unwrap().len(), 3);
}

#[test]
fn contraction_within_three_sigma() {
    let o = hcalc(&["run", "--suite", "contraction", "--seed", "42", "--samples", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["seed"], 42);
    assert_eq!(r["samples"], 20000);
    assert!(case(&r, "l4 monte-carlo (max (lhs - rhs)/stderr, 50 instances)")["value"].as_f64().unwrap() <= 3.0);
}

#[test]
fn unknown_suite_is_structured_error() {
    let o = hcalc(&["run", "--suite", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
    let r = stdout_json(&o);
    assert_eq!(r["error"]["kind"], "unknown-suite");
    assert!(r["error"]["message"].as_str().unwrap().contains("no-such-suite"));
}

#[test]
fn bad_parameters_are_structured_errors() {
    for args in [["run", "--suite", "fourier-pair", "--omega", "-1"], ["run", "--suite", "contraction", "--samples", "0"]] {
        let o = hcalc(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stdout_json(&o)["error"]["kind"].is_string());
    }
}

#[test]
fn usage_errors_are_structured() {
    let o = hcalc(&["run", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout_json(&o)["error"]["kind"], "usage");
    assert_eq!(hcalc(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"suite": "fourier-pair", "seed": 7, "omega": 2.0}"#).unwrap();
    let o = hcalc(&["run", "--json", cfg.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["suite"], "fourier-pair");
    assert_eq!(r["seed"], 9);
    case(&r, "fourier pair omega=2 (max error)");

    std::fs::write(&cfg, r#"{"suite": "fourier-pair", "speed": 3}"#).unwrap();
    let o = hcalc(&["run", "--json", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout_json(&o)["error"]["kind"], "config");

    let o = hcalc(&["run", "--json", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout_json(&o)["error"]["kind"], "io");
}

#[test]
fn out_dir_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = hcalc(&["run", "--suite", "laplace", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json = std::fs::read_to_string(dir.path().join("laplace.json")).unwrap();
    let saved: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(saved, stdout_json(&o));
    let csv = std::fs::read_to_string(dir.path().join("laplace-multiplier.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.split(',').all(|h| h.chars().any(|c| c.is_ascii_alphabetic())));
    assert!(lines.count() > 10);
}

#[test]
fn list_names_every_suite() {
    let o = hcalc(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for s in hcalc::suites::SUITES {
        assert!(text.lines().any(|l| l.starts_with(s.name)), "{}", s.name);
    }
    assert!(text.lines().any(|l| l.starts_with("all ")));
}
