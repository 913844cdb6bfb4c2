//! End-to-end behaviour of the `steinhaus` binary: output fields and exit codes.

use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinhaus")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinhaus")).args(args).env(key, val).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn universal_period_for_seven() {
    let v = json(&run(&["construct", "universal", "--m", "7"]));
    assert_eq!(v["period"], "043356662205511124430");
    assert_eq!(v["length"], 21);
    assert_eq!(v["balanced_lambda"], serde_json::json!([1, 2]));
    let text = run(&["--format", "text", "construct", "universal", "--m", "7"]);
    assert_eq!(String::from_utf8_lossy(&text.stdout).trim(), "043356662205511124430");
}

#[test]
fn large_moduli_use_value_arrays() {
    let v = json(&run(&["construct", "universal", "--m", "12"]));
    let period = v["period"].as_array().expect("array for m > 10");
    assert_eq!(period.len() as u64, v["length"].as_u64().unwrap());
    assert!(period.iter().all(|x| x.as_u64().unwrap() < 12));
}

#[test]
fn triangle_verify_exit_codes() {
    let ok = run(&["triangle", "verify", "--m", "5", "--row", "11044", "--balanced"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["counts"], serde_json::json!([3, 3, 3, 3, 3]));
    let bad = run(&["triangle", "verify", "--m", "8", "--row", "00000000", "--rule", "negated", "--balanced"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn triangle_gen_rows_and_render() {
    let v = json(&run(&["triangle", "gen", "--m", "3", "--row", "0121"]));
    assert_eq!(v["rows"], serde_json::json!(["0121", "100", "10", "1"]));
    assert_eq!(v["counts"], serde_json::json!([4, 5, 1]));
    let v = json(&run(&["triangle", "gen", "--m", "3", "--row", "0121", "--render", "pgm"]));
    assert!(v["render"].as_str().unwrap().starts_with("P2\n"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&["no-such-verb"]).status.code(), Some(2));
    assert_eq!(run(&["triangle", "gen", "--m", "3"]).status.code(), Some(2));
    assert_eq!(run(&["iap", "derive", "--spec", "{not json"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "family", "--m", "8", "--hint", r#"{"family":"zzz"}"#]).status.code(), Some(2));
}

#[test]
fn budget_exceeded_exits_three() {
    let out = run_env(&["search", "brute", "--m", "5", "--n", "9"], "STEINHAUS_BUDGET", "10");
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn family_hint_outside_its_moduli_fails() {
    let hint = r#"{"family":"e","i0":1,"negative":false,"alpha":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#;
    let v = json(&run(&["construct", "family", "--m", "8", "--hint", hint]));
    assert_eq!(v["length"], 96);
    assert_eq!(run(&["construct", "family", "--m", "6", "--hint", hint]).status.code(), Some(1));
}

#[test]
fn kernel_dimension_and_lift() {
    let v = json(&run(&["kernel", "--k", "12", "--prime", "2"]));
    assert_eq!(v["dimension"], 8);
    assert_eq!(v["p"], 24);
    assert_eq!(v["basis"].as_array().unwrap().len(), 8);
    let v = json(&run(&["kernel", "--k", "14", "--prime", "2"]));
    assert_eq!(v["dimension"], 12);
}

#[test]
fn sharded_search_sums_to_whole() {
    let whole = json(&run(&["search", "brute", "--m", "5", "--n", "5"]));
    assert_eq!(whole["balanced"], 12);
    assert_eq!(whole["balanced_up_to_units"], 3);
    let mut sum = 0;
    for s in ["0", "1", "2"] {
        let part = json(&run(&["search", "brute", "--m", "5", "--n", "5", "--shards", "3", "--shard", s]));
        sum += part["balanced"].as_u64().unwrap();
    }
    assert_eq!(sum, 12);
}

#[test]
fn resume_file_round_trip() {
    let path = std::env::temp_dir().join(format!("steinhaus-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let args = ["search", "brute", "--m", "3", "--n", "8", "--resume", p, "--checkpoint-every", "500"];
    let first = json(&run(&args));
    assert!(path.exists());
    let second = json(&run(&args));
    std::fs::remove_file(&path).ok();
    assert_eq!(first["balanced"], second["balanced"]);
    assert_eq!(first["witnesses"], second["witnesses"]);
}

#[test]
fn bset_levels_reported() {
    let v = json(&run(&["search", "bset", "--k", "12", "--u", "2"]));
    let counts: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["up_to_units"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![1, 8, 86]);
}

#[test]
fn iap_derivation_and_window() {
    let spec = r#"{"m":5,"k":3,"A":[1,2,3],"D":[1,1,1]}"#;
    let v = json(&run(&["iap", "derive", "--spec", spec, "--times", "2"]));
    assert_eq!(v["spec"]["A"], serde_json::json!([3, 0, 0]));
    assert_eq!(v["spec"]["D"], serde_json::json!([4, 4, 4]));
    let v = json(&run(&["iap", "window", "--spec", spec, "--from", "0", "--to", "2"]));
    assert_eq!(v["window"], "123");
}
