use std::process::{Command, Output};

use serde_json::Value;

fn kmonoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmonoid")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strip_timing(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("elapsed_ms");
    }
    v
}

#[test]
fn single_check_report_schema() {
    let out = kmonoid(&["verify", "monoid"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["version"].is_string());
    assert_eq!(v["config"]["nmax"], 5);
    assert_eq!(v["config"]["window"], 3);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    let c = &checks[0];
    assert_eq!(c["check_id"], "monoid");
    assert_eq!(c["verdict"], "PASS");
    for key in ["anchor", "witnesses", "findings", "dims", "elapsed_ms"] {
        assert!(c.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn audit_findings_are_reported_without_failing() {
    let out = kmonoid(&["verify", "coh-main", "--range", "-3..3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let f: Vec<&str> = v["checks"][0]["findings"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(f, vec!["index-discrepancy item 4 n=-3: literal 36 vs oracle 4", "index-discrepancy item 4 n=-2: literal 25 vs oracle 1"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "k4", "--nmax", "4", "--window", "2"];
    let a = strip_timing(json(&kmonoid(&args)));
    let b = strip_timing(json(&kmonoid(&args)));
    assert_eq!(a, b);
    assert_eq!(a["checks"][0]["verdict"], "PASS");
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(kmonoid(&["verify", "no-such-check"]).status.code(), Some(2));
    assert_eq!(kmonoid(&["verify", "monoid", "--range", "3..-3"]).status.code(), Some(2));
    assert_eq!(kmonoid(&["verify", "monoid", "--nmax", "3", "--window", "3"]).status.code(), Some(2));
    assert_eq!(kmonoid(&["table", "nothing"]).status.code(), Some(2));
}

#[test]
fn hilbert_table_csv() {
    let out = kmonoid(&["table", "hilbert", "--nmax", "4", "--window", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "j,dim,expected\n0,1,1\n1,4,4\n2,9,9\n3,16,16\n");
}

#[test]
fn k4_table_json() {
    let out = kmonoid(&["table", "k4-system", "--nmax", "4", "--window", "2"]);
    let v = json(&out);
    let dims: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![0, 1, 1, 1]);
}

#[test]
fn text_format_and_out_file() {
    let path = std::env::temp_dir().join(format!("kmonoid-cli-test-{}.txt", std::process::id()));
    let out = kmonoid(&["verify", "euler", "--format", "text", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("euler"), "{text}");
    assert!(text.contains("PASS"));
}
