//! The demo exports compile natively; exercise them end to end here.

use hardy_wasm::{constant_report, minorant_report, reduction_report};

const DOC: &str = r#"
kind = "coremap"

[space]
points = ["s0", "s1", "s2"]
mu = ["1", "1", "1"]

[weights]
u = ["5", "2", "3"]

[core]
chain = [[0], [0, 1], [0, 1, 2]]

[coremap]
items = ["y1", "y2", "y3"]
tau = ["1", "1", "1"]
ball = [0, 1, 2]

[exponents]
p = "1"
q = "1"
"#;

#[test]
fn minorant_payload_has_prefix_minimum() {
    let json = minorant_report(DOC).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let minorants: Vec<f64> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["minorant"].as_f64().unwrap())
        .collect();
    assert_eq!(minorants, vec![5.0, 2.0, 2.0]);
    assert_eq!(v["chain_len"], 3);
}

#[test]
fn reduction_payload_lists_atoms() {
    let json = reduction_report(DOC).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["infinite"], false);
    assert_eq!(v["lambda"].as_array().unwrap().len(), 3);
    let w: Vec<f64> = v["w"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(w, vec![5.0, 2.0, 2.0]);
}

#[test]
fn constant_payload_sweeps_q() {
    let json = constant_report(DOC, "1/2", "theoremA").unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["kind"], "equivalent");
    assert!(v["value"].as_f64().unwrap() > 0.0);
    assert!(v["lower_bound"].as_f64().unwrap() > 0.0);

    let json = constant_report(DOC, "1", "theoremA").unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["kind"], "exact");
    assert_eq!(v["exact"], "3/1");
}

#[test]
fn parse_errors_surface_as_strings() {
    let err = minorant_report("kind = 3").unwrap_err();
    assert!(err.contains("problem file"));
    let err = constant_report(DOC, "0", "theoremA").unwrap_err();
    assert!(err.contains("q"));
}
