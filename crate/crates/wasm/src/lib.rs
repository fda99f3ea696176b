//! Browser bindings for the demo page.
//!
//! Each export takes a problem file as TOML text and returns a JSON
//! string shaped for plotting. The same functions compile natively, so
//! the test suite exercises them without a wasm toolchain.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use hardy_core::hardy::{l1_best_constant, prepare, reduce_to_halfline, OuterExponent};
use hardy_core::oracle::maximize_ratio;
use hardy_core::problem::{BuiltProblem, ProblemFile};
use hardy_core::rational::{format_rat, parse_rat, rat_to_f64, ExtRat};
use hardy_core::Error;

#[derive(Serialize)]
struct PointOut {
    label: String,
    mu: f64,
    rank: Option<usize>,
    weight: Option<f64>,
    minorant: Option<f64>,
    weight_str: Option<String>,
    minorant_str: Option<String>,
}

#[derive(Serialize)]
struct MinorantOut {
    points: Vec<PointOut>,
    per_layer: Vec<f64>,
    chain_len: usize,
}

#[derive(Serialize)]
struct AtomOut {
    position: f64,
    mass: f64,
    position_str: String,
    mass_str: String,
}

#[derive(Serialize)]
struct ReductionOut {
    infinite: bool,
    lambda: Vec<AtomOut>,
    nu: Vec<AtomOut>,
    w: Vec<f64>,
}

#[derive(Serialize)]
struct ConstantOut {
    p: String,
    q: String,
    outer: String,
    kind: String,
    value: f64,
    exact: Option<String>,
    lower_bound: f64,
    notes: String,
}

fn build(toml_text: &str) -> Result<BuiltProblem, Error> {
    ProblemFile::from_toml_str(toml_text)?.build()
}

fn err_str(e: Error) -> String {
    e.to_string()
}

/// Greatest core-decreasing minorant of the instance's weight density,
/// per point, with the per-layer prefix values.
#[wasm_bindgen]
pub fn minorant_report(toml_text: &str) -> Result<String, String> {
    let built = build(toml_text).map_err(err_str)?;
    let problem = built.to_hardy().map_err(err_str)?;
    let pre = prepare(&problem).map_err(err_str)?;
    let mut points = Vec::with_capacity(problem.space.len());
    for s in 0..problem.space.len() {
        let new = pre.induced.point_map[s];
        let weight = new.map(|i| &pre.u0[i]);
        let minorant = new.map(|i| &pre.minor.minorant[i]);
        points.push(PointOut {
            label: problem.space.label(s).to_string(),
            mu: rat_to_f64(problem.space.mu(s)),
            rank: new.map(|i| pre.induced.core.rank_of(i).unwrap()),
            weight: weight.map(|v| v.to_f64()),
            minorant: minorant.map(|v| v.to_f64()),
            weight_str: weight.map(|v| v.to_string()),
            minorant_str: minorant.map(|v| v.to_string()),
        });
    }
    let out = MinorantOut {
        per_layer: pre.minor.per_layer.iter().map(ExtRat::to_f64).collect(),
        chain_len: pre.induced.core.len(),
        points,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// The induced line measure, the push-forward of the item weights, and
/// the transferred minorant weight.
#[wasm_bindgen]
pub fn reduction_report(toml_text: &str) -> Result<String, String> {
    let built = build(toml_text).map_err(err_str)?;
    let problem = built.to_hardy().map_err(err_str)?;
    let out = match reduce_to_halfline(&problem) {
        Ok(red) => {
            let atoms = |m: &hardy_core::LineMeasure| {
                m.atoms()
                    .iter()
                    .map(|(p, w)| AtomOut {
                        position: rat_to_f64(p),
                        mass: rat_to_f64(w),
                        position_str: format_rat(p),
                        mass_str: format_rat(w),
                    })
                    .collect()
            };
            ReductionOut {
                infinite: false,
                lambda: atoms(&red.lambda),
                nu: atoms(&red.nu),
                w: red.w.values().iter().map(ExtRat::to_f64).collect(),
            }
        }
        Err(Error::SingularEta) => ReductionOut {
            infinite: true,
            lambda: Vec::new(),
            nu: Vec::new(),
            w: Vec::new(),
        },
        Err(e) => return Err(err_str(e)),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Best constant of the instance with the exponent `q` (and outer
/// exponent variant) overridden, so a slider can sweep `q` without
/// editing the file. `p` stays fixed at 1; the searched lower bound uses
/// a small deterministic budget.
#[wasm_bindgen]
pub fn constant_report(toml_text: &str, q: &str, outer: &str) -> Result<String, String> {
    let file = ProblemFile::from_toml_str(toml_text).map_err(err_str)?;
    let mut file = file;
    file.exponents.p = "1".into();
    file.exponents.q = q.into();
    parse_rat(q).map_err(err_str)?;
    let outer: OuterExponent = outer.parse().map_err(err_str)?;
    let built = file.build().map_err(err_str)?;
    let problem = built.to_hardy().map_err(err_str)?;
    let est = l1_best_constant(&problem, outer).map_err(err_str)?;
    let search = maximize_ratio(&problem, 2, 800, 42);
    let out = ConstantOut {
        p: "1/1".into(),
        q: format_rat(problem.exps.q()),
        outer: outer.as_str().into(),
        kind: est.kind.as_str().into(),
        value: est.value,
        exact: est.exact.map(|e| e.to_string()),
        lower_bound: search.lower_bound,
        notes: est.notes,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}
