//! End-to-end checks of the binary: dispatch, report contents, exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn minorant_prints_prefix_minimum_and_lp_crosscheck() {
    let out = run(&["minorant", fixture("minorant3.toml").to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_stdout(&out);
    let minorants: Vec<&str> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["minorant"].as_str().unwrap())
        .collect();
    assert_eq!(minorants, vec!["5/1", "2/1", "2/1"]);
    assert_eq!(v["lp"], "9/1");
    assert_eq!(v["variational"], "9/1");
    assert_eq!(v["formula_matches_lp"], true);
}

#[test]
fn minorant_of_constant_weight_is_itself() {
    let out = run(&["minorant", fixture("unit3.toml").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    for p in v["points"].as_array().unwrap() {
        assert_eq!(p["minorant"], "1/1");
    }
}

#[test]
fn constant_q1_is_exact_three_with_matching_oracle() {
    let out = run(&["constant", fixture("unit3.toml").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    let est = &v["estimates"][0];
    assert_eq!(est["kind"], "exact");
    assert_eq!(est["exact"], "3/1");
    assert_eq!(v["oracle"]["point_mass_norm"]["exact"], "3/1");
    let lower: f64 = v["oracle"]["search"]["lower_bound"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!((lower - 3.0).abs() < 1e-9);
}

#[test]
fn constant_q_half_is_equivalent_six_with_sandwich() {
    let out = run(&["constant", fixture("unit3_qhalf.toml").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    let est = &v["estimates"][0];
    assert_eq!(est["kind"], "equivalent");
    let value: f64 = est["value"].as_str().unwrap().parse().unwrap();
    assert!((value - 6.0).abs() < 1e-9);
    assert!(v["sandwich"].is_object(), "sandwich ratios expected");
    assert!(v["oracle"]["point_mass_norm"].is_null());
}

#[test]
fn constant_dispatches_p_gt_1_to_the_condition() {
    let out = run(&["constant", fixture("classical16.toml").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["estimates"][0]["name"], "condition");
    let value: f64 = v["estimates"][0]["value"].as_str().unwrap().parse().unwrap();
    assert!(value > 0.5 && value <= 1.0, "condition value {value}");
    let lower: f64 = v["oracle"]["search"]["lower_bound"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(lower > 1.0, "searched lower bound {lower}");
}

#[test]
fn constant_with_infinite_weight_reports_inf() {
    let out = run(&["constant", fixture("singular.toml").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["estimates"][0]["value"], "inf");
}

#[test]
fn reduce_emits_the_halfline_data() {
    let out = run(&["reduce", fixture("minorant3.toml").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["infinite"], false);
    let lambda = v["lambda"].as_array().unwrap();
    assert_eq!(lambda.len(), 3);
    assert_eq!(lambda[0]["position"], "1/1");
    let w: Vec<&str> = v["w"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(w, vec!["5/1", "2/1", "2/1"]);
}

#[test]
fn reduce_flags_singular_instances() {
    let out = run(&["reduce", fixture("singular.toml").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["infinite"], true);
}

#[test]
fn malformed_rational_exits_one_naming_the_field() {
    let dir = std::env::temp_dir().join("hardy-cli-bad-rational");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    let doc = std::fs::read_to_string(fixture("unit3.toml")).unwrap();
    std::fs::write(&path, doc.replace("mu = [\"1\", \"1\", \"1\"]", "mu = [\"1\", \"1/0\", \"1\"]"))
        .unwrap();
    let out = run(&["minorant", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("space.mu[1]"), "stderr: {stderr}");
}

#[test]
fn p_gt_1_without_metric_shape_is_a_validation_error() {
    let dir = std::env::temp_dir().join("hardy-cli-p2-generic");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p2.toml");
    let doc = std::fs::read_to_string(fixture("unit3.toml")).unwrap();
    std::fs::write(&path, doc.replace("p = \"1\"", "p = \"2\"")).unwrap();
    let out = run(&["constant", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_small_run_passes_and_emits_csv_too() {
    let out = run(&["verify", "--seed", "5", "--count", "15", "--size", "5"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_stdout(&out);
    assert_eq!(v["passed"], true);
    assert!(v["suites"].as_array().unwrap().len() >= 8);

    let csv = run(&[
        "verify", "--seed", "5", "--count", "10", "--size", "5", "--emit", "csv",
    ]);
    assert!(csv.status.success());
    let text = String::from_utf8_lossy(&csv.stdout);
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("passed,true"));
}

#[test]
fn timing_goes_to_stderr_not_stdout() {
    let out = run(&["minorant", fixture("unit3.toml").to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("elapsed"));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("elapsed"));
}
