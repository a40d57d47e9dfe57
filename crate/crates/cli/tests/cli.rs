use std::process::{Command, Output};

use serde_json::Value;

fn afl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afl")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = afl(args);
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid json");
    (v, out.status.code().unwrap())
}

#[test]
fn intersect_small_values() {
    let (v, code) = json(&["intersect", "--h", "2", "--v", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["N"], "q + 2");
    assert_eq!(v["schema"], "afl-report/1");
    let (v, _) = json(&["intersect", "--v", "1", "--q", "5"]);
    assert_eq!(v["results"]["N"], "1");
    assert_eq!(v["results"]["N_at_q"], "1");
}

#[test]
fn intersect_rank_three() {
    let (v, code) = json(&["intersect", "--h", "3", "--v", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["N"], "q^4 + 2*q^3 + 3*q^2 + q + 3");
}

#[test]
fn orbital_smallest() {
    let (v, code) = json(&["orbital", "--v", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["coefficients"], serde_json::json!(["1", "1"]));
    assert_eq!(v["results"]["nprime"], "-1");
}

#[test]
fn table_csv_rows() {
    let out = afl(&["table", "--v-max", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "v,N,N_prime,pass");
    assert_eq!(lines[2], "3,q + 2,-q - 2,true");
}

#[test]
fn empty_table_is_header_only() {
    let out = afl(&["table", "--v-max", "0", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "v,N,N_prime,pass\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(afl(&["intersect", "--v", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(afl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(afl(&["intersect", "--v", "2"]).status.code(), Some(2));
    assert_eq!(afl(&["orbital", "--v", "4"]).status.code(), Some(2));
    assert_eq!(afl(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn json_schema_shape() {
    let (v, _) = json(&["table", "--v-max", "3"]);
    let obj = v.as_object().unwrap();
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    assert_eq!(keys, ["checks", "command", "params", "pass", "results", "rows", "schema"]);
    assert!(obj["command"].as_array().unwrap().iter().all(Value::is_string));
    for c in obj["checks"].as_array().unwrap() {
        assert!(c["name"].is_string() && c["pass"].is_boolean());
    }
    for r in obj["rows"].as_array().unwrap() {
        assert!(r["v"].is_u64() && r["N"].is_string() && r["N_prime"].is_string() && r["pass"].is_boolean());
    }
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn output_is_deterministic() {
    let a = afl(&["oracle", "lattices", "--q", "3", "--v", "3"]);
    let b = afl(&["oracle", "lattices", "--q", "3", "--v", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_is_opt_in() {
    let (v, _) = json(&["intersect", "--v", "1"]);
    assert!(v.get("wall_clock_ms").is_none());
    let (v, _) = json(&["intersect", "--v", "1", "--timing"]);
    assert!(v["wall_clock_ms"].is_u64());
}

#[test]
fn afl_suite_passes() {
    let (v, code) = json(&["verify", "--suite", "afl", "--v-max", "39"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 20);
}

#[test]
fn lattice_oracle_smallest() {
    let (v, code) = json(&["oracle", "lattices", "--q", "2", "--v", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["weighted_poly"], serde_json::json!([1, 1]));
}

#[test]
fn small_window_is_a_check_failure() {
    let out = afl(&["oracle", "lattices", "--q", "2", "--v", "3", "--window", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("window overflow"));
}

#[test]
fn counting_oracles() {
    let (v, code) = json(&["oracle", "matcount", "--a", "1", "--q", "4", "--prec", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["table"]["measured"]["volumes"]["1"], "3/16");
    let (v, code) = json(&["oracle", "classstat", "--q", "2", "--prec", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["table"]["measured"]["volumes"]["1"], "0");
}
