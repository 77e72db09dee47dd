use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn loopalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopalg")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn build_d4() {
    let out = loopalg(&["build", "--type", "D4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["payload"]["dim"], 28);
    assert_eq!(v["payload"]["root_count"], 24);
}

#[test]
fn classify_d4_has_three_rows() {
    let out = loopalg(&["classify", "--type", "D4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let orders: Vec<u64> = v["payload"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["twist_order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, vec![1, 2, 3]);
    assert_eq!(v["payload"]["rows"][2]["affine_label"], "D4^(3)");
}

#[test]
fn classify_matrix_algebra() {
    let out = loopalg(&["classify", "--matrix-algebra", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["payload"]["class_count"], 1);
    assert_eq!(v["payload"]["note"], "all loop algebras trivial");
}

#[test]
fn text_table_mirrors_json() {
    let out = loopalg(&["classify", "--type", "A2", "--text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("A2^(1)") && text.contains("A2^(2)"));
    assert!(text.contains("[3,5]"));
}

#[test]
fn extract_gcm_a1() {
    let out = loopalg(&["extract-gcm", "--type", "A1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["payload"]["gcm"], serde_json::json!([[2, -2], [-2, 2]]));
    assert_eq!(v["payload"]["label"]["type"], "A1");
    assert_eq!(v["payload"]["det"], "0");
}

#[test]
fn untwist_composed_d4() {
    let out = loopalg(&["untwist", "--type", "D4", "--auto", r#"{"pi":[3,2,4,1],"s":[1,0,1,1],"m":3}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["payload"]["coboundary"].is_null());
}

#[test]
fn descent_and_grade_on_external_algebra() {
    let auto = r#"{"period":2,"matrix":[[{"order":1,"coeffs":["1"]},{"order":1,"coeffs":["0"]},{"order":1,"coeffs":["0"]}],[{"order":1,"coeffs":["0"]},{"order":1,"coeffs":["-1"]},{"order":1,"coeffs":["0"]}],[{"order":1,"coeffs":["0"]},{"order":1,"coeffs":["0"]},{"order":1,"coeffs":["-1"]}]]}"#;
    let grade = loopalg(&["grade", "--algebra", &data("sl2.json"), "--auto", auto]);
    assert_eq!(grade.status.code(), Some(0));
    assert_eq!(json(&grade)["payload"]["dims"], serde_json::json!([1, 2]));
    let descent = loopalg(&["descent-verify", "--algebra", &data("sl2.json"), "--auto", auto]);
    assert_eq!(descent.status.code(), Some(0));
}

#[test]
fn non_multiplicative_map_is_a_verification_failure() {
    let auto = r#"{"period":1,"matrix":[[{"order":1,"coeffs":["1"]},{"order":1,"coeffs":["0"]},{"order":1,"coeffs":["0"]}],[{"order":1,"coeffs":["0"]},{"order":1,"coeffs":["2"]},{"order":1,"coeffs":["0"]}],[{"order":1,"coeffs":["0"]},{"order":1,"coeffs":["0"]},{"order":1,"coeffs":["1"]}]]}"#;
    let out = loopalg(&["grade", "--algebra", &data("sl2.json"), "--auto", auto]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn centroid_of_twisted_sl3() {
    let out = loopalg(&["centroid", "--type", "A2", "--auto", r#"{"pi":[2,1],"m":1}"#]);
    assert_eq!(out.status.code(), Some(0));
    let dims: Vec<u64> = json(&out)["payload"]["centroid"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 0]);
}

#[test]
fn corrupted_fixture_fails_jacobi() {
    let out = loopalg(&["verify-all", "--algebra", &data("corrupted_sl2.json"), "--text"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("criterion 1  FAIL"), "{text}");
    assert!(text.contains("Jacobi fails on (h, e, f)"), "{text}");
}

#[test]
fn empty_fixture_list() {
    let out = loopalg(&["verify-all", "--no-fixtures"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["payload"]["criteria"], serde_json::json!([]));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = loopalg(&["verify-all", "--only", "2,7", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert!(!String::from_utf8(first).unwrap().contains("elapsed"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(loopalg(&["build", "--type", "Q7"]).status.code(), Some(2));
    assert_eq!(loopalg(&["grade", "--type", "A2", "--auto", "{not json"]).status.code(), Some(2));
    assert_eq!(loopalg(&["build", "--type", "A2", "--matrix-algebra", "2"]).status.code(), Some(2));
    assert_eq!(loopalg(&["build", "--algebra", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(loopalg(&["untwist", "--type", "A2", "--auto", r#"{"pi":[2,1],"s":[1,0],"m":2}"#]).status.code(), Some(2));
    assert_eq!(loopalg(&["frobnicate"]).status.code(), Some(2));
}
