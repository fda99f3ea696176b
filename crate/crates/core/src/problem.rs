//! The problem-file format.
//!
//! One TOML document describes one inequality instance; a top-level
//! `kind` tag selects the shape. Rationals travel as `num/den` strings
//! so no binary floating point ever enters a file.
//!
//! * `generic` — a chain of point sets with one weight per chain set.
//! * `coremap` — a chain plus an explicit item list, each item holding a
//!   weight and a chain index (or `"empty"`).
//! * `metric`  — a distance matrix with an anchor and the two weights
//!   `omega`, `v`; balls around the anchor form the chain.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{Exponents, HardyProblem};
use crate::metric::{MetricSpace, MetricValidation};
use crate::rational::{parse_rat, Rat};
use crate::spaces::{CoreMap, MeasureSpace, OrderedCore, ScalarField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Generic,
    Coremap,
    Metric,
}

/// A chain index or the empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallRef {
    Empty,
    Chain(usize),
}

impl Serialize for BallRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BallRef::Empty => serializer.serialize_str("empty"),
            BallRef::Chain(i) => serializer.serialize_u64(*i as u64),
        }
    }
}

impl<'de> Deserialize<'de> for BallRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct BallVisitor;
        impl<'de> Visitor<'de> for BallVisitor {
            type Value = BallRef;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a chain index or the string \"empty\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BallRef, E> {
                Ok(BallRef::Chain(v as usize))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BallRef, E> {
                if v < 0 {
                    Err(E::custom("ball index must be non-negative"))
                } else {
                    Ok(BallRef::Chain(v as usize))
                }
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BallRef, E> {
                if v == "empty" {
                    Ok(BallRef::Empty)
                } else {
                    Err(E::custom(format!(
                        "expected \"empty\" or an index, got `{v}`"
                    )))
                }
            }
        }
        deserializer.deserialize_any(BallVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSection {
    pub points: Vec<String>,
    pub mu: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoreSection {
    pub chain: Vec<Vec<usize>>,
    /// One weight per chain set; required for the `generic` kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoreMapSection {
    pub items: Vec<String>,
    pub tau: Vec<String>,
    pub ball: Vec<BallRef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSection {
    pub dist: Vec<Vec<String>>,
    pub anchor: usize,
    pub omega: Vec<String>,
    pub v: Vec<String>,
    #[serde(default)]
    pub semimetric: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentsSection {
    pub p: String,
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub kind: ProblemKind,
    pub space: SpaceSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core: Option<CoreSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coremap: Option<CoreMapSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSection>,
    pub exponents: ExponentsSection,
}

/// A parsed and validated instance, ready for dispatch.
#[derive(Clone, Debug)]
pub enum BuiltProblem {
    Hardy(HardyProblem),
    Metric(MetricProblem),
}

/// The metric shape keeps its two weights separate so the `p > 1`
/// conditions can reach them.
#[derive(Clone, Debug)]
pub struct MetricProblem {
    pub metric: MetricSpace,
    pub omega: ScalarField,
    pub v: ScalarField,
    pub exps: Exponents,
}

impl MetricProblem {
    pub fn to_hardy(&self) -> Result<HardyProblem> {
        self.metric.as_problem(
            &self.omega,
            &self.v,
            self.exps.p().clone(),
            self.exps.q().clone(),
        )
    }
}

impl BuiltProblem {
    pub fn exponents(&self) -> &Exponents {
        match self {
            BuiltProblem::Hardy(h) => &h.exps,
            BuiltProblem::Metric(m) => &m.exps,
        }
    }

    /// The underlying inequality instance in either shape.
    pub fn to_hardy(&self) -> Result<HardyProblem> {
        match self {
            BuiltProblem::Hardy(h) => Ok(h.clone()),
            BuiltProblem::Metric(m) => m.to_hardy(),
        }
    }
}

fn parse_field(value: &str, field: &str) -> Result<Rat> {
    parse_rat(value).map_err(|e| Error::validation(field, e.to_string()))
}

fn parse_vec(values: &[String], field: &str) -> Result<Vec<Rat>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| parse_field(v, &format!("{field}[{i}]")))
        .collect()
}

fn require_len(len: usize, expected: usize, field: &str) -> Result<()> {
    if len != expected {
        return Err(Error::validation(
            field,
            format!("expected {expected} entries, got {len}"),
        ));
    }
    Ok(())
}

fn require_nonneg(values: &[Rat], field: &str) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if v < &Rat::from_integer(0.into()) {
            return Err(Error::validation(
                format!("{field}[{i}]"),
                "must be non-negative",
            ));
        }
    }
    Ok(())
}

impl ProblemFile {
    pub fn from_toml_str(text: &str) -> Result<ProblemFile> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Validate and build the instance this file describes.
    pub fn build(&self) -> Result<BuiltProblem> {
        let n = self.space.points.len();
        require_len(self.space.mu.len(), n, "space.mu")?;
        let mu = parse_vec(&self.space.mu, "space.mu")?;
        require_nonneg(&mu, "space.mu")?;
        let space = MeasureSpace::new(self.space.points.clone(), mu)?;

        let p = parse_field(&self.exponents.p, "exponents.p")?;
        let q = parse_field(&self.exponents.q, "exponents.q")?;
        let exps = Exponents::new(p, q)?;

        match self.kind {
            ProblemKind::Metric => {
                let section = self
                    .metric
                    .as_ref()
                    .ok_or_else(|| Error::validation("metric", "required for kind = \"metric\""))?;
                if self.core.is_some() || self.coremap.is_some() || self.weights.is_some() {
                    return Err(Error::validation(
                        "metric",
                        "kind = \"metric\" admits no core, coremap, or weights sections",
                    ));
                }
                require_len(section.dist.len(), n, "metric.dist")?;
                let mut dist = Vec::with_capacity(n);
                for (i, row) in section.dist.iter().enumerate() {
                    require_len(row.len(), n, &format!("metric.dist[{i}]"))?;
                    dist.push(parse_vec(row, &format!("metric.dist[{i}]"))?);
                }
                require_len(section.omega.len(), n, "metric.omega")?;
                require_len(section.v.len(), n, "metric.v")?;
                let omega = parse_vec(&section.omega, "metric.omega")?;
                let v = parse_vec(&section.v, "metric.v")?;
                require_nonneg(&omega, "metric.omega")?;
                require_nonneg(&v, "metric.v")?;
                let validation = if section.semimetric {
                    MetricValidation::Semimetric
                } else {
                    MetricValidation::Strict
                };
                let metric = MetricSpace::new(space, dist, section.anchor, validation)?;
                Ok(BuiltProblem::Metric(MetricProblem {
                    metric,
                    omega: ScalarField::from_rats(omega),
                    v: ScalarField::from_rats(v),
                    exps,
                }))
            }
            ProblemKind::Generic | ProblemKind::Coremap => {
                if self.metric.is_some() {
                    return Err(Error::validation(
                        "metric",
                        "only kind = \"metric\" takes a metric section",
                    ));
                }
                let core_section = self
                    .core
                    .as_ref()
                    .ok_or_else(|| Error::validation("core", "chain section is required"))?;
                let chain: Vec<BTreeSet<usize>> = core_section
                    .chain
                    .iter()
                    .map(|set| set.iter().copied().collect())
                    .collect();
                let core = OrderedCore::new(chain, n)?;
                let eta = self.build_eta(&space)?;
                let cm = match self.kind {
                    ProblemKind::Generic => {
                        if self.coremap.is_some() {
                            return Err(Error::validation(
                                "coremap",
                                "kind = \"generic\" weights chain sets directly; use kind = \"coremap\" for an item list",
                            ));
                        }
                        let tau_raw = core_section.tau.as_ref().ok_or_else(|| {
                            Error::validation("core.tau", "required for kind = \"generic\"")
                        })?;
                        require_len(tau_raw.len(), core.len(), "core.tau")?;
                        let tau = parse_vec(tau_raw, "core.tau")?;
                        require_nonneg(&tau, "core.tau")?;
                        let labels = (0..core.len()).map(|i| format!("A{}", i + 1)).collect();
                        let refs = (0..core.len()).map(Some).collect();
                        CoreMap::from_chain_refs(labels, tau, &core, refs)?
                    }
                    ProblemKind::Coremap => {
                        let section = self.coremap.as_ref().ok_or_else(|| {
                            Error::validation("coremap", "required for kind = \"coremap\"")
                        })?;
                        let m = section.items.len();
                        require_len(section.tau.len(), m, "coremap.tau")?;
                        require_len(section.ball.len(), m, "coremap.ball")?;
                        let tau = parse_vec(&section.tau, "coremap.tau")?;
                        require_nonneg(&tau, "coremap.tau")?;
                        let refs: Vec<Option<usize>> = section
                            .ball
                            .iter()
                            .map(|b| match b {
                                BallRef::Empty => None,
                                BallRef::Chain(i) => Some(*i),
                            })
                            .collect();
                        CoreMap::from_chain_refs(section.items.clone(), tau, &core, refs)?
                    }
                    ProblemKind::Metric => unreachable!(),
                };
                Ok(BuiltProblem::Hardy(HardyProblem::new(space, eta, cm, exps)?))
            }
        }
    }

    fn build_eta(&self, space: &MeasureSpace) -> Result<ScalarField> {
        let n = space.len();
        let weights = self
            .weights
            .as_ref()
            .ok_or_else(|| Error::validation("weights", "eta or u is required"))?;
        match (&weights.eta, &weights.u) {
            (Some(eta_raw), None) => {
                require_len(eta_raw.len(), n, "weights.eta")?;
                let eta = parse_vec(eta_raw, "weights.eta")?;
                require_nonneg(&eta, "weights.eta")?;
                Ok(ScalarField::from_rats(eta))
            }
            (None, Some(u_raw)) => {
                require_len(u_raw.len(), n, "weights.u")?;
                let u = parse_vec(u_raw, "weights.u")?;
                require_nonneg(&u, "weights.u")?;
                let eta = (0..n).map(|s| &u[s] * space.mu(s)).collect();
                Ok(ScalarField::from_rats(eta))
            }
            (Some(_), Some(_)) => Err(Error::validation(
                "weights",
                "give exactly one of eta or u, not both",
            )),
            (None, None) => Err(Error::validation("weights", "eta or u is required")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ExtRat};

    const COREMAP_DOC: &str = r#"
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
    fn coremap_document_builds() {
        let file = ProblemFile::from_toml_str(COREMAP_DOC).unwrap();
        let built = file.build().unwrap();
        match built {
            BuiltProblem::Hardy(h) => {
                assert_eq!(h.space.len(), 3);
                assert_eq!(h.cm.len(), 3);
                assert_eq!(h.eta[0], ExtRat::from_int(5));
            }
            _ => panic!("expected a plain instance"),
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let file = ProblemFile::from_toml_str(COREMAP_DOC).unwrap();
        let text = file.to_toml_string().unwrap();
        let again = ProblemFile::from_toml_str(&text).unwrap();
        assert_eq!(file, again);
    }

    #[test]
    fn zero_denominator_names_the_field() {
        let doc = COREMAP_DOC.replace("mu = [\"1\", \"1\", \"1\"]", "mu = [\"1\", \"1/0\", \"1\"]");
        let err = ProblemFile::from_toml_str(&doc).unwrap().build().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("space.mu[1]"), "got: {msg}");
    }

    #[test]
    fn generic_kind_weights_chain_sets() {
        let doc = r#"
kind = "generic"

[space]
points = ["s0", "s1"]
mu = ["1", "1"]

[weights]
eta = ["1", "1"]

[core]
chain = [[0], [0, 1]]
tau = ["1/2", "3"]

[exponents]
p = "1"
q = "2"
"#;
        let built = ProblemFile::from_toml_str(doc).unwrap().build().unwrap();
        match built {
            BuiltProblem::Hardy(h) => {
                assert_eq!(h.cm.len(), 2);
                assert_eq!(h.cm.tau(0), &rat(1, 2));
            }
            _ => panic!("expected a plain instance"),
        }
    }

    #[test]
    fn metric_kind_builds_ball_problem() {
        let doc = r#"
kind = "metric"

[space]
points = ["a", "x1", "x2"]
mu = ["1", "1", "1"]

[metric]
dist = [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]]
anchor = 0
omega = ["1", "1", "1"]
v = ["1", "1", "1"]

[exponents]
p = "1"
q = "1"
"#;
        let built = ProblemFile::from_toml_str(doc).unwrap().build().unwrap();
        match built {
            BuiltProblem::Metric(m) => {
                let h = m.to_hardy().unwrap();
                assert_eq!(h.cm.distinct_sets().len(), 3);
            }
            _ => panic!("expected a metric instance"),
        }
    }

    #[test]
    fn empty_ball_sentinel_parses() {
        let doc = COREMAP_DOC.replace("ball = [0, 1, 2]", "ball = [\"empty\", 1, 2]");
        let file = ProblemFile::from_toml_str(&doc).unwrap();
        assert_eq!(file.coremap.as_ref().unwrap().ball[0], BallRef::Empty);
        assert!(file.build().is_ok());
        let text = file.to_toml_string().unwrap();
        assert!(text.contains("\"empty\""));
    }

    #[test]
    fn exponent_validation() {
        let doc = COREMAP_DOC.replace("p = \"1\"", "p = \"1/2\"");
        assert!(ProblemFile::from_toml_str(&doc).unwrap().build().is_err());
    }
}
