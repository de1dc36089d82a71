use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn vfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vfc")).args(args).env_remove("VFC_DIM").output().expect("vfc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("vfc-cli-{}-{name}", std::process::id()))
}

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn required(v: &Value) -> Vec<&str> {
    v["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap()).collect()
}

fn assert_report_shape(report: &Value) {
    let s = schema();
    for k in required(&s) {
        assert!(report.get(k).is_some(), "missing {k}");
    }
    for k in required(&s["properties"]["config"]) {
        assert!(report["config"].get(k).is_some(), "missing config.{k}");
    }
    let check_schema = &s["properties"]["checks"]["items"];
    for c in report["checks"].as_array().unwrap() {
        for k in required(check_schema) {
            assert!(c.get(k).is_some(), "missing check.{k}");
        }
        if c["status"] == "fail" {
            assert!(c["witness"]["inputs"].is_array() && c["witness"]["residual"].is_string());
        }
    }
}

#[test]
fn weil_table_n1() {
    let o = vfc(&["table", "weil", "--dim", "1"]);
    assert!(o.status.success());
    let t = stdout(&o);
    assert_eq!(t.lines().map(|l| l.split_whitespace().collect::<Vec<_>>()).collect::<Vec<_>>(), vec![vec!["H^0", "1"], vec!["H^3", "1"]]);
}

#[test]
fn haefliger_table_n2() {
    let o = vfc(&["table", "haefliger", "--dim", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dims"]["3"], 2);
    assert_eq!(v["dims"]["4"], 4);
}

#[test]
fn vey_basis_degree_five() {
    let o = vfc(&["table", "vey", "--dim", "2", "--degree", "5"]);
    let t = stdout(&o);
    assert!(t.contains("u1 | c1^2") && t.contains("u1 | c2"));
    assert_eq!(t.lines().count(), 2);
}

#[test]
fn env_sets_dimension_and_flag_wins() {
    let run = |args: &[&str]| {
        let o = Command::new(env!("CARGO_BIN_EXE_vfc")).args(args).env("VFC_DIM", "3").output().unwrap();
        serde_json::from_slice::<Value>(&o.stdout).unwrap()["N"].clone()
    };
    assert_eq!(run(&["table", "weil", "--format", "json"]), 3);
    assert_eq!(run(&["table", "weil", "--format", "json", "--dim", "1"]), 1);
}

#[test]
fn unknown_suite_is_usage_error() {
    let o = vfc(&["verify", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(vfc(&["verify", "cocycles", "--dim", "0"]).status.code(), Some(2));
    assert_eq!(vfc(&["verify", "cocycles", "--model", "sphere"]).status.code(), Some(2));
    assert_eq!(vfc(&["table", "nothing"]).status.code(), Some(2));
}

#[test]
fn extensions_n1_pass() {
    let o = vfc(&["verify", "extensions", "--dim", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_report_shape(&v);
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn cocycles_n2_radius2_pass() {
    let o = vfc(&["verify", "cocycles", "--dim", "2", "--radius", "2", "--seed", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_report_shape(&v);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn empty_report() {
    let path = tmp("empty.json");
    let o = vfc(&["report", path.to_str().unwrap(), "--suites", ""]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_report_shape(&v);
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
    std::fs::remove_file(path).ok();
}

#[test]
fn planted_defects_fail_with_witness() {
    let o = vfc(&["verify", "crossed-hom", "--dim", "2", "--radius", "1", "--planted", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_report_shape(&v);
    let failed: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c["name"].as_str().unwrap().starts_with("planted:")));
}

#[test]
fn reports_are_byte_identical() {
    let (a, b) = (tmp("a.json"), tmp("b.json"));
    for p in [&a, &b] {
        let o = vfc(&["report", p.to_str().unwrap(), "--suites", "crossed-hom,extensions", "--dim", "1", "--seed", "3", "--no-timing"]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_file(a).ok();
    std::fs::remove_file(b).ok();
}
