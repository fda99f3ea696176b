//! Finite metric measure spaces and the anchored-ball front end.
//!
//! Closed balls around a fixed anchor form an ordered core, so every
//! construction in this crate applies verbatim: the minorant becomes the
//! running essential infimum over balls and the best-constant formulas
//! become ball/tail functionals of the two weights. No disintegration of
//! the measure into radial parts is used anywhere.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hardy::{
    condition_p_le_q, condition_q_lt_p, l1_best_constant, ConstantEstimate, Exponents,
    HardyProblem, OuterExponent, QltPRegime,
};
use crate::minorant::greatest_minorant;
use crate::rational::Rat;
use crate::spaces::{CoreMap, MeasureSpace, OrderedCore, ScalarField};

/// How strictly the distance matrix is validated. Nothing downstream
/// uses the triangle inequality, so semimetrics are admissible on
/// request; the default insists on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MetricValidation {
    #[default]
    Strict,
    Semimetric,
}

/// A finite metric measure space with a distinguished anchor point.
#[derive(Clone, Debug)]
pub struct MetricSpace {
    space: MeasureSpace,
    dist: Vec<Vec<Rat>>,
    anchor: usize,
}

impl MetricSpace {
    pub fn new(
        space: MeasureSpace,
        dist: Vec<Vec<Rat>>,
        anchor: usize,
        validation: MetricValidation,
    ) -> Result<Self> {
        let n = space.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::LengthMismatch {
                what: "distance matrix",
                expected: n,
                got: dist.len(),
            });
        }
        if anchor >= n {
            return Err(Error::PointIndex(anchor, n));
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(Error::NonzeroDiagonal(i));
            }
            for j in 0..n {
                if dist[i][j] < Rat::zero() {
                    return Err(Error::NegativeDistance(i, j));
                }
                if dist[i][j] != dist[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        if validation == MetricValidation::Strict {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if &dist[i][k] > &(&dist[i][j] + &dist[j][k]) {
                            return Err(Error::TriangleInequality(i, j, k));
                        }
                    }
                }
            }
        }
        Ok(MetricSpace { space, dist, anchor })
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    /// Distance from the anchor.
    pub fn radius(&self, s: usize) -> &Rat {
        &self.dist[self.anchor][s]
    }

    /// The chain of closed anchored balls, one per distinct anchor
    /// distance, together with the map sending each point to the ball of
    /// its own radius. Item weights are supplied by the caller.
    pub fn ball_core(&self, tau: &[Rat]) -> Result<(OrderedCore, CoreMap)> {
        let n = self.space.len();
        if tau.len() != n {
            return Err(Error::LengthMismatch {
                what: "tau over points",
                expected: n,
                got: tau.len(),
            });
        }
        let mut radii: Vec<Rat> = (0..n).map(|s| self.radius(s).clone()).collect();
        let mut sorted = radii.clone();
        sorted.sort();
        sorted.dedup();
        let chain: Vec<BTreeSet<usize>> = sorted
            .iter()
            .map(|r| (0..n).filter(|&s| self.radius(s) <= r).collect())
            .collect();
        let core = OrderedCore::new(chain, n)?;
        let refs: Vec<Option<usize>> = radii
            .drain(..)
            .map(|r| Some(sorted.binary_search(&r).expect("radius is listed")))
            .collect();
        let labels = self.space.labels().to_vec();
        let cm = CoreMap::from_chain_refs(labels, tau.to_vec(), &core, refs)?;
        Ok((core, cm))
    }

    /// Running essential infimum of `v` over anchored balls: the
    /// greatest core-decreasing minorant for the ball core.
    pub fn metric_minorant(&self, v: &ScalarField) -> Result<ScalarField> {
        let tau = vec![Rat::one(); self.space.len()];
        let (core, _) = self.ball_core(&tau)?;
        Ok(greatest_minorant(&core, &self.space, v)?.minorant)
    }

    /// Package the weights as a `p = 1` instance over the ball core
    /// (`τ = ω dμ`, `η = v dμ`) and evaluate the best constant.
    pub fn metric_best_constant(
        &self,
        omega: &ScalarField,
        v: &ScalarField,
        q: Rat,
        outer: OuterExponent,
    ) -> Result<ConstantEstimate> {
        let problem = self.as_problem(omega, v, Rat::one(), q)?;
        l1_best_constant(&problem, outer)
    }

    /// The regime-appropriate tail/ball functional for `p > 1`.
    pub fn metric_condition(
        &self,
        omega: &ScalarField,
        v: &ScalarField,
        p: Rat,
        q: Rat,
    ) -> Result<ConstantEstimate> {
        if p <= Rat::one() {
            return Err(Error::InvalidExponents(format!(
                "the p > 1 conditions require p > 1, got p = {p} (use the best-constant formulas for p = 1)"
            )));
        }
        let exps = Exponents::new(p, q)?;
        let tau = vec![Rat::one(); self.space.len()];
        let (core, _) = self.ball_core(&tau)?;
        if exps.p() <= exps.q() {
            condition_p_le_q(&self.space, &core, omega, v, &exps)
        } else if exps.q() < &Rat::one() {
            condition_q_lt_p(&self.space, &core, omega, v, &exps, QltPRegime::QBelowOne)
        } else if exps.q() > &Rat::one() {
            condition_q_lt_p(&self.space, &core, omega, v, &exps, QltPRegime::QAboveOne)
        } else {
            Err(Error::InvalidExponents(
                "q = 1 < p is not covered by the tail/ball conditions".into(),
            ))
        }
    }

    /// The underlying inequality instance for oracle searches:
    /// `τ = ω dμ` scaled by `tau_scale`, `η = v dμ`, exponents `(p, q)`
    /// with `p` supplied by the caller.
    pub fn as_problem(
        &self,
        omega: &ScalarField,
        v: &ScalarField,
        p: Rat,
        q: Rat,
    ) -> Result<HardyProblem> {
        let n = self.space.len();
        if omega.len() != n || v.len() != n {
            return Err(Error::LengthMismatch {
                what: "weights over space",
                expected: n,
                got: omega.len().min(v.len()),
            });
        }
        let tau: Vec<Rat> = (0..n)
            .map(|s| {
                omega[s]
                    .finite()
                    .map(|w| w * self.space.mu(s))
                    .ok_or_else(|| Error::NotFinite(format!("omega at point {s}")))
            })
            .collect::<Result<_>>()?;
        let eta: Vec<Rat> = (0..n)
            .map(|s| {
                v[s].finite()
                    .map(|w| w * self.space.mu(s))
                    .ok_or_else(|| Error::NotFinite(format!("v at point {s}")))
            })
            .collect::<Result<_>>()?;
        let (_, cm) = self.ball_core(&tau)?;
        HardyProblem::new(
            self.space.clone(),
            ScalarField::from_rats(eta),
            cm,
            Exponents::new(p, q)?,
        )
    }
}

/// Collinear points at the given anchor distances (anchor first).
pub fn collinear(space: MeasureSpace, radii: &[Rat]) -> Result<MetricSpace> {
    let n = space.len();
    if radii.len() != n {
        return Err(Error::LengthMismatch {
            what: "radii over points",
            expected: n,
            got: radii.len(),
        });
    }
    let dist: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if radii[i] >= radii[j] {
                        &radii[i] - &radii[j]
                    } else {
                        &radii[j] - &radii[i]
                    }
                })
                .collect()
        })
        .collect();
    MetricSpace::new(space, dist, 0, MetricValidation::Strict)
}
