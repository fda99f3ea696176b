//! Machine-readable reports.
//!
//! Reports are canonical: struct fields serialize in declaration order,
//! rationals as `num/den` strings, binary64 values as strings with 17
//! significant digits. Given equal inputs and seeds, two runs emit
//! byte-identical documents (timing goes to stderr, never into the
//! report).

use serde::Serialize;
use serde_json::Value;

use hardy_core::rational::ExtRat;

/// 17 significant digits; round-trips every binary64 exactly.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

pub fn fmt_ext(x: &ExtRat) -> String {
    x.to_string()
}

#[derive(Serialize)]
pub struct InputEcho {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct PointRow {
    pub label: String,
    pub mu: String,
    pub eta: String,
    /// Minorant value; absent for points outside the covered union.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minorant: Option<String>,
}

#[derive(Serialize)]
pub struct MinorantReport {
    pub command: String,
    pub input: InputEcho,
    pub points: Vec<PointRow>,
    pub per_layer: Vec<String>,
    /// `∫ 1·u̲ dμ` from the minorant formula.
    pub variational: String,
    /// The same quantity from the exact linear program.
    pub lp: String,
    pub formula_matches_lp: bool,
}

#[derive(Serialize)]
pub struct EstimateRow {
    pub name: String,
    pub kind: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub notes: String,
}

#[derive(Serialize)]
pub struct SearchRow {
    pub lower_bound: String,
    pub iterations: u64,
    pub converged: bool,
    pub seed: u64,
}

#[derive(Serialize)]
pub struct OracleBlock {
    /// Point-mass dual norm, available for `p = 1, q ≥ 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_mass_norm: Option<EstimateRow>,
    pub search: SearchRow,
}

#[derive(Serialize)]
pub struct SandwichBlock {
    pub estimate_over_lower: String,
    pub lower_over_estimate: String,
}

#[derive(Serialize)]
pub struct ConstantReport {
    pub command: String,
    pub input: InputEcho,
    pub p: String,
    pub q: String,
    pub outer_exponent: String,
    pub estimates: Vec<EstimateRow>,
    pub oracle: OracleBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sandwich: Option<SandwichBlock>,
}

#[derive(Serialize)]
pub struct AtomRow {
    pub position: String,
    pub mass: String,
}

#[derive(Serialize)]
pub struct ReduceReport {
    pub command: String,
    pub input: InputEcho,
    /// The constant is infinite outright; no finite reduction exists.
    pub infinite: bool,
    pub lambda: Vec<AtomRow>,
    pub nu: Vec<AtomRow>,
    pub w: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize)]
pub struct SuiteRow {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub command: String,
    pub seed: u64,
    pub count: usize,
    pub size: usize,
    pub sandwich_bound: String,
    pub suites: Vec<SuiteRow>,
    pub passed: bool,
}

/// Flatten a report into deterministic `key,value` CSV rows.
pub fn to_csv(value: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", value, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), csv_quote(s))),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Json,
    Csv,
}

pub fn render<T: Serialize>(report: &T, emit: Emit) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    match emit {
        Emit::Json => {
            let mut text = serde_json::to_string_pretty(&value).expect("reports serialize");
            text.push('\n');
            text
        }
        Emit::Csv => to_csv(&value),
    }
}
