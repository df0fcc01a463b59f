use std::process::{Command, Output};

use serde_json::Value;

fn ctk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctk")).args(args).output().expect("run ctk")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn enumerate_a3_finds_fourteen() {
    let out = ctk(&["enumerate", "--type", "A", "--rank", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["count"], 14);
    assert_eq!(v["objects"].as_array().unwrap().len(), 14);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn enumerate_methods_agree_on_d4() {
    let counts: Vec<Value> = ["brute", "mutation", "both"]
        .iter()
        .map(|m| json(&ctk(&["enumerate", "--type", "D", "--rank", "4", "--method", m]))["count"].clone())
        .collect();
    assert!(counts.iter().all(|c| *c == 50), "{counts:?}");
}

#[test]
fn three_cluster_category_count() {
    let v = json(&ctk(&["enumerate", "--type", "A", "--rank", "2", "-m", "3"]));
    assert_eq!(v["count"], 12);
}

#[test]
fn unsupported_rank_is_a_usage_error() {
    let out = ctk(&["enumerate", "--type", "E", "--rank", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn rank_budget_needs_allow_large() {
    assert_eq!(ctk(&["enumerate", "--type", "A", "--rank", "12"]).status.code(), Some(2));
}

#[test]
fn malformed_flags_are_usage_errors() {
    assert_eq!(ctk(&["enumerate", "--type", "F", "--rank", "4"]).status.code(), Some(2));
    assert_eq!(ctk(&["catalog", "--type", "A", "--rank", "2", "--a-range", "5..1"]).status.code(), Some(2));
}

#[test]
fn seed_quiver_as_dot() {
    let out = ctk(&["quiver", "--type", "A", "--rank", "3", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 2);
    assert!(dot.contains("P1") && dot.contains("P3"));
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "--type", "D", "--rank", "5"];
    let a = ctk(&args);
    let b = ctk(&["--threads", "1", "classify", "--type", "D", "--rank", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn threads_env_var_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_ctk"))
        .env("CTK_THREADS", "2")
        .args(["enumerate", "--type", "A", "--rank", "4"])
        .output()
        .unwrap();
    assert_eq!(json(&out)["count"], 42);
}

#[test]
fn verify_type_a_is_clean() {
    let out = ctk(&["verify", "--suite", "typeA", "--rank-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert!(v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn verify_e8_reports_the_unlisted_class() {
    let out = ctk(&["verify", "--suite", "typeE", "--type", "E", "--rank", "8"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn catalog_a3_entries() {
    let out = ctk(&["catalog", "--type", "A", "--rank", "3", "--a-range", "1..12", "--b", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 12);
    let observed: Vec<i64> =
        entries.iter().filter(|e| e["observed"] == true).map(|e| e["a"].as_i64().unwrap()).collect();
    assert_eq!(observed, vec![2, 3, 4, 6, 8, 9, 10, 12]);
    assert!(entries.iter().all(|e| e["predicted"] == e["observed"]));
}

#[test]
fn hom_for_one_object() {
    let out = ctk(&["hom", "--type", "A", "--rank", "2", "--object", "#0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn out_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("ctk-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a2.json");
    let out = ctk(&["enumerate", "--type", "A", "--rank", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["count"], 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_format_is_available() {
    let out = ctk(&["enumerate", "--type", "A", "--rank", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stdout.is_empty());
}
