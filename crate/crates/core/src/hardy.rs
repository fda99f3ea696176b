//! Best constants for the weighted `L¹ → L^q` inequality over a core
//! map, and the one-parameter conditions for `p > 1`.
//!
//! For `p = 1` the best constant admits a closed description after the
//! right-hand weight is replaced by its greatest core-decreasing
//! minorant: a dual supremum over points when `q ≥ 1` (exact), and a
//! two-weight double sum equivalent to the half-line condition when
//! `q ∈ (0,1)` (exact up to absolute constants). For `p > 1` the
//! characterizations are tail/ball functionals over the chain sets.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::minorant::{greatest_minorant, MinorantResult};
use crate::rational::{rat_to_f64, ExtRat, Rat};
use crate::spaces::{items_by_ball_measure, CoreMap, InducedCore, MeasureSpace, ScalarField};
use crate::spaces::OrderedCore;
use crate::transition::{
    core_line, induced_line_measure, pushforward_measure, r_map, LineField, LineMeasure,
};

/// The exponent pair of one inequality instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exponents {
    p: Rat,
    q: Rat,
}

impl Exponents {
    pub fn new(p: Rat, q: Rat) -> Result<Self> {
        if p < Rat::one() {
            return Err(Error::InvalidExponents(format!(
                "p must satisfy p >= 1, got {p}"
            )));
        }
        if q <= Rat::zero() {
            return Err(Error::InvalidExponents(format!(
                "q must satisfy q > 0, got {q}"
            )));
        }
        Ok(Exponents { p, q })
    }

    pub fn p(&self) -> &Rat {
        &self.p
    }

    pub fn q(&self) -> &Rat {
        &self.q
    }

    pub fn p_is_one(&self) -> bool {
        self.p.is_one()
    }

    /// Conjugate exponent `p/(p-1)`, infinite when `p = 1`.
    pub fn p_prime(&self) -> ExtRat {
        if self.p.is_one() {
            ExtRat::Infinite
        } else {
            ExtRat::Finite(&self.p / (&self.p - Rat::one()))
        }
    }

    /// Conjugate exponent `q/(q-1)` for `q > 1`.
    pub fn q_prime(&self) -> Option<Rat> {
        if self.q > Rat::one() {
            Some(&self.q / (&self.q - Rat::one()))
        } else {
            None
        }
    }

    /// `r` with `1/r = 1/q - 1/p`, defined when `q < p`.
    pub fn r(&self) -> Option<Rat> {
        if self.q < self.p {
            Some(&self.p * &self.q / (&self.p - &self.q))
        } else {
            None
        }
    }

    pub fn p_f64(&self) -> f64 {
        rat_to_f64(&self.p)
    }

    pub fn q_f64(&self) -> f64 {
        rat_to_f64(&self.q)
    }
}

/// Which outer exponent closes the `q ∈ (0,1)` display.
///
/// The two printed forms of the half-line criterion disagree: one closes
/// with `(1-q)/q`, the other with `1/q`. Only `(1-q)/q` gives the
/// homogeneity `τ → tτ ⇒ C → t^{1/q} C`, so it is the default; the
/// other form stays available for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OuterExponent {
    #[default]
    TheoremA,
    Stepanov,
}

impl OuterExponent {
    pub fn as_str(&self) -> &'static str {
        match self {
            OuterExponent::TheoremA => "theoremA",
            OuterExponent::Stepanov => "stepanov",
        }
    }

    pub fn exponent_f64(&self, q: &Rat) -> f64 {
        match self {
            OuterExponent::TheoremA => rat_to_f64(&((Rat::one() - q) / q)),
            OuterExponent::Stepanov => rat_to_f64(&q.recip()),
        }
    }
}

impl std::str::FromStr for OuterExponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theoremA" | "theorema" => Ok(OuterExponent::TheoremA),
            "stepanov" => Ok(OuterExponent::Stepanov),
            other => Err(Error::Parse(format!(
                "unknown outer exponent `{other}` (expected theoremA or stepanov)"
            ))),
        }
    }
}

/// Whether a computed constant is the best constant itself or only
/// equivalent to it up to absolute constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantKind {
    Exact,
    Equivalent,
}

impl ConstantKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstantKind::Exact => "exact",
            ConstantKind::Equivalent => "equivalent",
        }
    }
}

/// A computed constant with its provenance.
#[derive(Clone, Debug)]
pub struct ConstantEstimate {
    /// Binary64 value; `+∞` is a valid outcome.
    pub value: f64,
    /// The exact rational value for power-free formulas (`q = 1`).
    pub exact: Option<ExtRat>,
    pub kind: ConstantKind,
    pub notes: String,
}

impl ConstantEstimate {
    fn new(value: f64, kind: ConstantKind, notes: impl Into<String>) -> Self {
        ConstantEstimate {
            value,
            exact: None,
            kind,
            notes: notes.into(),
        }
    }

    fn with_exact(mut self, exact: ExtRat) -> Self {
        self.exact = Some(exact);
        self
    }
}

/// One inequality instance: `( ∫_Y (∫_{B(y)} f dμ)^q dτ )^{1/q} ≤ C (∫ f^p dη)^{1/p}`.
#[derive(Clone, Debug)]
pub struct HardyProblem {
    pub space: MeasureSpace,
    pub eta: ScalarField,
    pub cm: CoreMap,
    pub exps: Exponents,
}

impl HardyProblem {
    pub fn new(space: MeasureSpace, eta: ScalarField, cm: CoreMap, exps: Exponents) -> Result<Self> {
        if eta.len() != space.len() {
            return Err(Error::LengthMismatch {
                what: "eta over space",
                expected: space.len(),
                got: eta.len(),
            });
        }
        if cm.n_points() != space.len() {
            return Err(Error::LengthMismatch {
                what: "core map over space",
                expected: space.len(),
                got: cm.n_points(),
            });
        }
        for (i, v) in eta.iter().enumerate() {
            match v.finite() {
                Some(r) if r >= &Rat::zero() => {}
                Some(_) => {
                    return Err(Error::NegativeWeight { what: "eta", index: i });
                }
                None => return Err(Error::NotFinite(format!("eta at point {i}"))),
            }
        }
        Ok(HardyProblem { space, eta, cm, exps })
    }

    /// The same instance with every item weight multiplied by `t`.
    pub fn scale_tau(&self, t: &Rat) -> HardyProblem {
        HardyProblem {
            space: self.space.clone(),
            eta: self.eta.clone(),
            cm: self.cm.scale_tau(t),
            exps: self.exps.clone(),
        }
    }

    /// The same instance with `η` multiplied by `t`.
    pub fn scale_eta(&self, t: &Rat) -> HardyProblem {
        HardyProblem {
            space: self.space.clone(),
            eta: self.eta.scale(t),
            cm: self.cm.clone(),
            exps: self.exps.clone(),
        }
    }
}

/// Density of `η` against `μ` plus the two degenerate bookkeeping sets.
#[derive(Clone, Debug)]
pub struct EtaDecomposition {
    /// `η/μ` on positive-mass points; a placeholder `∞` elsewhere (the
    /// minorant never reads zero-mass points).
    pub u: ScalarField,
    /// True when some positive-mass point carries no `η` weight yet lies
    /// in a ball of positive item weight, which forces `C = ∞`.
    pub infinite: bool,
    /// Zero-mass points carrying positive `η` weight; they only inflate
    /// the right-hand side and are excluded from the inequality.
    pub dropped: Vec<usize>,
}

pub fn decompose_eta(problem: &HardyProblem) -> EtaDecomposition {
    let n = problem.space.len();
    let mut u = Vec::with_capacity(n);
    let mut infinite = false;
    let mut dropped = Vec::new();
    for s in 0..n {
        let mu = problem.space.mu(s);
        let eta = problem.eta[s].finite().expect("eta validated finite");
        if mu.is_zero() {
            u.push(ExtRat::Infinite);
            if !eta.is_zero() {
                dropped.push(s);
            }
        } else {
            u.push(ExtRat::Finite(eta / mu));
            if eta.is_zero() && !problem.cm.tau_reach(s).is_zero() {
                infinite = true;
            }
        }
    }
    EtaDecomposition {
        u: ScalarField::new(u),
        infinite,
        dropped,
    }
}

/// Everything the `p = 1` formulas consume, computed once.
pub struct Prepared {
    pub decomp: EtaDecomposition,
    pub induced: InducedCore,
    /// `η/μ` transported to the covered subspace.
    pub u0: ScalarField,
    /// Greatest core-decreasing minorant of `u0` over the induced core.
    pub minor: MinorantResult,
    /// `τ({y : ball_rank(y) ≥ j})` per chain position.
    pub tau_tail: Vec<Rat>,
}

pub fn prepare(problem: &HardyProblem) -> Result<Prepared> {
    let decomp = decompose_eta(problem);
    let induced = problem.cm.induced_core(&problem.space)?;
    let u0 = induced.restrict_field(&decomp.u);
    let minor = greatest_minorant(&induced.core, &induced.space, &u0)?;
    let tau_tail = induced.tau_tail(problem.cm.tau_values());
    Ok(Prepared {
        decomp,
        induced,
        u0,
        minor,
        tau_tail,
    })
}

/// Best constant for `p = 1`.
///
/// For `q ≥ 1` this is the dual supremum
/// `sup_s τ({y : s ∈ B(y)})^{1/q} / u̲(s)` over positive-mass points,
/// exact as a rational at `q = 1`. For `q ∈ (0,1)` it is the double sum
/// transported from the half-line criterion, reported as `equivalent`.
pub fn l1_best_constant(problem: &HardyProblem, outer: OuterExponent) -> Result<ConstantEstimate> {
    if !problem.exps.p_is_one() {
        return Err(Error::InvalidExponents(format!(
            "the closed best-constant formulas require p = 1, got p = {}",
            problem.exps.p()
        )));
    }
    let pre = prepare(problem)?;
    l1_best_constant_prepared(problem, &pre, outer)
}

pub fn l1_best_constant_prepared(
    problem: &HardyProblem,
    pre: &Prepared,
    outer: OuterExponent,
) -> Result<ConstantEstimate> {
    let q = problem.exps.q();
    let q_ge_1 = q >= &Rat::one();
    let kind = if q_ge_1 {
        ConstantKind::Exact
    } else {
        ConstantKind::Equivalent
    };
    if pre.decomp.infinite {
        let est = ConstantEstimate::new(
            f64::INFINITY,
            kind,
            "eta vanishes on a tau-reachable positive-mass set",
        );
        return Ok(if q.is_one() {
            est.with_exact(ExtRat::Infinite)
        } else {
            est
        });
    }
    if q_ge_1 {
        dual_supremum(problem, pre)
    } else {
        halfline_double_sum(problem, pre, outer)
    }
}

fn dual_supremum(problem: &HardyProblem, pre: &Prepared) -> Result<ConstantEstimate> {
    let q = problem.exps.q();
    let notes = "dual supremum over points (p = 1, q >= 1)";
    if q.is_one() {
        let mut best = ExtRat::zero();
        for s in 0..pre.induced.space.len() {
            if !pre.induced.space.has_mass(s) {
                continue;
            }
            let tau_r = &pre.tau_tail[pre.induced.core.rank_of(s)?];
            let cand = ExtRat::Finite(tau_r.clone()).div(&pre.minor.minorant[s]);
            if cand > best {
                best = cand;
            }
        }
        let value = best.to_f64();
        return Ok(ConstantEstimate::new(value, ConstantKind::Exact, notes).with_exact(best));
    }
    let inv_q = rat_to_f64(&q.recip());
    let mut best = 0.0f64;
    for s in 0..pre.induced.space.len() {
        if !pre.induced.space.has_mass(s) {
            continue;
        }
        let tau_r = &pre.tau_tail[pre.induced.core.rank_of(s)?];
        if tau_r.is_zero() {
            continue;
        }
        let ubar = &pre.minor.minorant[s];
        if ubar.is_zero() {
            return Ok(ConstantEstimate::new(f64::INFINITY, ConstantKind::Exact, notes));
        }
        let cand = rat_to_f64(tau_r).powf(inv_q) / ubar.to_f64();
        if cand > best {
            best = cand;
        }
    }
    Ok(ConstantEstimate::new(best, ConstantKind::Exact, notes))
}

/// The `q ∈ (0,1)` double sum in outer-index coordinates: for each item
/// `z`, the inner sum runs over items whose ball measure does not exceed
/// that of `z`, weighting each by the reciprocal minorant value of the
/// transferred weight at its ball measure.
fn halfline_double_sum(
    problem: &HardyProblem,
    pre: &Prepared,
    outer: OuterExponent,
) -> Result<ConstantEstimate> {
    let q = problem.exps.q();
    let notes = format!(
        "two-weight double sum (p = 1, 0 < q < 1), outer exponent {}",
        outer.as_str()
    );
    let inner_exp = rat_to_f64(&(q / (Rat::one() - q)));
    let outer_exp = outer.exponent_f64(q);

    let cl = core_line(&pre.induced.core, &pre.induced.space)?;
    let w = r_map(&pre.induced.core, &pre.induced.space, &pre.minor.minorant)?;

    let mut total = 0.0f64;
    let mut running_inner = ExtRat::zero();
    let mut atom_idx = 0usize;
    let mut w_min = ExtRat::Infinite;
    for (pos, items) in items_by_ball_measure(&problem.cm, &problem.space) {
        while atom_idx < cl.line.len() && cl.line.position(atom_idx) <= &pos {
            w_min = w_min.min_with(&w[atom_idx]);
            atom_idx += 1;
        }
        let integrand = w_min.recip();
        let group_tau: Rat = items.iter().map(|&y| problem.cm.tau(y).clone()).sum();
        running_inner = running_inner.add(&integrand.mul_rat(&group_tau));
        for &z in &items {
            let tau_z = problem.cm.tau(z);
            if tau_z.is_zero() {
                continue;
            }
            if running_inner.is_infinite() {
                return Ok(ConstantEstimate::new(
                    f64::INFINITY,
                    ConstantKind::Equivalent,
                    notes,
                ));
            }
            total += running_inner.to_f64().powf(inner_exp) * rat_to_f64(tau_z);
        }
    }
    Ok(ConstantEstimate::new(
        total.powf(outer_exp),
        ConstantKind::Equivalent,
        notes,
    ))
}

/// The half-line data equivalent to a `p = 1` instance.
#[derive(Clone, Debug)]
pub struct HalflineReduction {
    /// Measure induced by the chain.
    pub lambda: LineMeasure,
    /// Push-forward of the item weights under `y ↦ μ(B(y))`.
    pub nu: LineMeasure,
    /// The transferred minorant weight, non-increasing along atoms.
    pub w: LineField,
}

/// Reduce a `p = 1` instance to the half line. Fails with
/// [`Error::SingularEta`] when the constant is infinite outright.
pub fn reduce_to_halfline(problem: &HardyProblem) -> Result<HalflineReduction> {
    if !problem.exps.p_is_one() {
        return Err(Error::InvalidExponents(format!(
            "the half-line reduction requires p = 1, got p = {}",
            problem.exps.p()
        )));
    }
    let pre = prepare(problem)?;
    if pre.decomp.infinite {
        return Err(Error::SingularEta);
    }
    let lambda = induced_line_measure(&pre.induced.core, &pre.induced.space)?;
    let nu = pushforward_measure(&problem.cm, &problem.space)?;
    let w = r_map(&pre.induced.core, &pre.induced.space, &pre.minor.minorant)?;
    Ok(HalflineReduction { lambda, nu, w })
}

/// Prefix minimum of a line field along atom order.
pub fn line_minorant(w: &LineField) -> LineField {
    let mut running = ExtRat::Infinite;
    let mut out = Vec::with_capacity(w.len());
    for v in w.values() {
        running = running.min_with(&v.abs());
        out.push(running.clone());
    }
    LineField::new(out)
}

/// The half-line criterion for `p = 1`, `q ∈ (0,1)`: the `ν`-integral of
/// the `q/(1-q)` power of the running `ν`-integral of `1/w̲`, closed with
/// the configured outer exponent. `w` lives on the atoms of `lambda` and
/// its non-increasing minorant along position order is taken first.
pub fn halfline_condition(
    lambda: &LineMeasure,
    w: &LineField,
    nu: &LineMeasure,
    q: &Rat,
    outer: OuterExponent,
) -> Result<ConstantEstimate> {
    if q <= &Rat::zero() || q >= &Rat::one() {
        return Err(Error::InvalidExponents(format!(
            "the half-line criterion requires 0 < q < 1, got q = {q}"
        )));
    }
    if w.len() != lambda.len() {
        return Err(Error::LengthMismatch {
            what: "weight over lambda atoms",
            expected: lambda.len(),
            got: w.len(),
        });
    }
    let notes = format!(
        "half-line two-measure criterion, outer exponent {}",
        outer.as_str()
    );
    let inner_exp = rat_to_f64(&(q / (Rat::one() - q)));
    let outer_exp = outer.exponent_f64(q);

    let mut total = 0.0f64;
    let mut running_inner = ExtRat::zero();
    let mut atom_idx = 0usize;
    let mut w_min = ExtRat::Infinite;
    for (pos, mass) in nu.atoms() {
        while atom_idx < lambda.len() && lambda.position(atom_idx) <= pos {
            w_min = w_min.min_with(&w[atom_idx].abs());
            atom_idx += 1;
        }
        let integrand = w_min.recip();
        running_inner = running_inner.add(&integrand.mul_rat(mass));
        if running_inner.is_infinite() {
            return Ok(ConstantEstimate::new(
                f64::INFINITY,
                ConstantKind::Equivalent,
                notes,
            ));
        }
        total += running_inner.to_f64().powf(inner_exp) * rat_to_f64(mass);
    }
    Ok(ConstantEstimate::new(
        total.powf(outer_exp),
        ConstantKind::Equivalent,
        notes,
    ))
}

/// The tail/ball supremum characterizing the inequality for `1 < p ≤ q`:
/// `sup_A (∫_{U∖A} ω dμ)^{1/q} (∫_A v^{1-p'} dμ)^{1/p'}` over chain sets.
pub fn condition_p_le_q(
    space: &MeasureSpace,
    core: &OrderedCore,
    omega: &ScalarField,
    v: &ScalarField,
    exps: &Exponents,
) -> Result<ConstantEstimate> {
    if exps.p() <= &Rat::one() || exps.p() > exps.q() {
        return Err(Error::InvalidExponents(format!(
            "this condition requires 1 < p <= q, got p = {}, q = {}",
            exps.p(),
            exps.q()
        )));
    }
    let (om_tail, v_ball) = tail_and_ball(space, core, omega, v, exps)?;
    let inv_q = 1.0 / exps.q_f64();
    let inv_p_prime = 1.0 - 1.0 / exps.p_f64();
    let mut best = 0.0f64;
    for j in 0..core.len() {
        let cand = om_tail[j].powf(inv_q) * v_ball[j].powf(inv_p_prime);
        if cand > best {
            best = cand;
        }
    }
    Ok(ConstantEstimate::new(
        best,
        ConstantKind::Equivalent,
        "tail-ball supremum (1 < p <= q)",
    ))
}

/// Which `q < p` integral condition applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QltPRegime {
    /// `0 < q < 1 < p`: integrand weighted by `ω dμ`, exponents `r/p`, `r/p'`.
    QBelowOne,
    /// `1 < q < p`: integrand weighted by `v^{1-p'} dμ`, exponents `r/q`, `r/q'`.
    QAboveOne,
}

/// The finiteness functional for `q < p` (no outer power applied).
pub fn condition_q_lt_p(
    space: &MeasureSpace,
    core: &OrderedCore,
    omega: &ScalarField,
    v: &ScalarField,
    exps: &Exponents,
    regime: QltPRegime,
) -> Result<ConstantEstimate> {
    let ok = match regime {
        QltPRegime::QBelowOne => exps.q() < &Rat::one() && exps.p() > &Rat::one(),
        QltPRegime::QAboveOne => exps.q() > &Rat::one() && exps.q() < exps.p(),
    };
    if !ok {
        return Err(Error::InvalidExponents(format!(
            "regime {:?} does not match p = {}, q = {}",
            regime,
            exps.p(),
            exps.q()
        )));
    }
    let r = exps
        .r()
        .ok_or_else(|| Error::InvalidExponents("r requires q < p".into()))?;
    let r_f = rat_to_f64(&r);
    let (tail_exp, ball_exp) = match regime {
        QltPRegime::QBelowOne => (r_f / exps.p_f64(), r_f * (1.0 - 1.0 / exps.p_f64())),
        QltPRegime::QAboveOne => {
            let q_prime = exps.q_prime().expect("q > 1 in this regime");
            (r_f / exps.q_f64(), r_f / rat_to_f64(&q_prime))
        }
    };
    let (om_tail, v_ball) = tail_and_ball(space, core, omega, v, exps)?;
    let neg_exp = 1.0 - exps.p_f64() / (exps.p_f64() - 1.0); // 1 - p'
    let mut total = 0.0f64;
    for s in 0..space.len() {
        let mu = rat_to_f64(space.mu(s));
        if mu == 0.0 {
            continue;
        }
        let j = core.rank_of(s)?;
        let factor = om_tail[j].powf(tail_exp) * v_ball[j].powf(ball_exp);
        let weight = match regime {
            QltPRegime::QBelowOne => omega[s].to_f64() * mu,
            QltPRegime::QAboveOne => v[s].to_f64().powf(neg_exp) * mu,
        };
        if weight == 0.0 {
            continue;
        }
        total += factor * weight;
    }
    Ok(ConstantEstimate::new(
        total,
        ConstantKind::Equivalent,
        match regime {
            QltPRegime::QBelowOne => "tail-ball integral (0 < q < 1 < p)",
            QltPRegime::QAboveOne => "tail-ball integral (1 < q < p)",
        },
    ))
}

/// Per chain position: the exact tail `∫_{U∖A_j} ω dμ` (converted once)
/// and the cumulative `∫_{A_j} v^{1-p'} dμ` in binary64.
fn tail_and_ball(
    space: &MeasureSpace,
    core: &OrderedCore,
    omega: &ScalarField,
    v: &ScalarField,
    exps: &Exponents,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if core.n_points() != space.len() {
        return Err(Error::LengthMismatch {
            what: "core over space",
            expected: space.len(),
            got: core.n_points(),
        });
    }
    if omega.len() != space.len() || v.len() != space.len() {
        return Err(Error::LengthMismatch {
            what: "weights over space",
            expected: space.len(),
            got: omega.len().min(v.len()),
        });
    }
    let k = core.len();
    let neg_exp = 1.0 - exps.p_f64() / (exps.p_f64() - 1.0); // 1 - p'
    let mut om_by_rank = vec![ExtRat::zero(); k];
    let mut vb_by_rank = vec![0.0f64; k];
    for s in 0..space.len() {
        let mu = space.mu(s);
        if mu.is_zero() {
            continue;
        }
        let j = core.rank_of(s)?;
        om_by_rank[j] = om_by_rank[j].add(&omega[s].abs().mul_rat(mu));
        vb_by_rank[j] += v[s].to_f64().powf(neg_exp) * rat_to_f64(mu);
    }
    let mut om_tail = vec![0.0f64; k];
    let mut acc = ExtRat::zero();
    for j in (0..k).rev() {
        om_tail[j] = acc.to_f64();
        acc = acc.add(&om_by_rank[j]);
    }
    let mut v_ball = vec![0.0f64; k];
    let mut acc = 0.0f64;
    for j in 0..k {
        acc += vb_by_rank[j];
        v_ball[j] = acc;
    }
    Ok((om_tail, v_ball))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};
    use crate::spaces::OrderedCore;

    fn unit_fixture(q: Rat) -> HardyProblem {
        let space = MeasureSpace::uniform(3, rint(1));
        let core = OrderedCore::prefixes(3);
        let cm = CoreMap::from_chain_refs(
            vec!["y1".into(), "y2".into(), "y3".into()],
            vec![rint(1), rint(1), rint(1)],
            &core,
            vec![Some(0), Some(1), Some(2)],
        )
        .unwrap();
        let eta = ScalarField::from_ints(&[1, 1, 1]);
        HardyProblem::new(space, eta, cm, Exponents::new(rint(1), q).unwrap()).unwrap()
    }

    #[test]
    fn decompose_direct_density() {
        let space = MeasureSpace::uniform(2, rint(1));
        let core = OrderedCore::prefixes(2);
        let cm = CoreMap::from_chain_refs(
            vec!["y".into()],
            vec![rint(1)],
            &core,
            vec![Some(1)],
        )
        .unwrap();
        let problem = HardyProblem::new(
            space,
            ScalarField::from_ints(&[2, 6]),
            cm,
            Exponents::new(rint(1), rint(1)).unwrap(),
        )
        .unwrap();
        let d = decompose_eta(&problem);
        assert_eq!(d.u, ScalarField::from_ints(&[2, 6]));
        assert!(!d.infinite);
        assert!(d.dropped.is_empty());
    }

    #[test]
    fn decompose_detects_singular_part() {
        let space = MeasureSpace::uniform(2, rint(1));
        let core = OrderedCore::prefixes(2);
        let cm = CoreMap::from_chain_refs(
            vec!["y1".into()],
            vec![rint(1)],
            &core,
            vec![Some(0)],
        )
        .unwrap();
        let problem = HardyProblem::new(
            space,
            ScalarField::from_ints(&[0, 1]),
            cm,
            Exponents::new(rint(1), rint(1)).unwrap(),
        )
        .unwrap();
        let d = decompose_eta(&problem);
        assert!(d.infinite);
        let est = l1_best_constant(&problem, OuterExponent::TheoremA).unwrap();
        assert!(est.value.is_infinite());
    }

    #[test]
    fn decompose_drops_eta_on_null_points() {
        let space = MeasureSpace::new(vec!["a".into(), "b".into()], vec![rint(1), rint(0)]).unwrap();
        let core = OrderedCore::prefixes(2);
        let cm = CoreMap::from_chain_refs(
            vec!["y".into()],
            vec![rint(1)],
            &core,
            vec![Some(1)],
        )
        .unwrap();
        let problem = HardyProblem::new(
            space,
            ScalarField::from_ints(&[1, 5]),
            cm,
            Exponents::new(rint(1), rint(1)).unwrap(),
        )
        .unwrap();
        let d = decompose_eta(&problem);
        assert_eq!(d.u[0], ExtRat::from_int(1));
        assert_eq!(d.dropped, vec![1]);
        assert!(!d.infinite);
    }

    #[test]
    fn unit_fixture_q1_gives_three() {
        let problem = unit_fixture(rint(1));
        let est = l1_best_constant(&problem, OuterExponent::TheoremA).unwrap();
        assert_eq!(est.exact, Some(ExtRat::from_int(3)));
        assert_eq!(est.value, 3.0);
        assert_eq!(est.kind, ConstantKind::Exact);
    }

    #[test]
    fn unit_fixture_q_half_gives_six() {
        let problem = unit_fixture(rat(1, 2));
        let est = l1_best_constant(&problem, OuterExponent::TheoremA).unwrap();
        assert!((est.value - 6.0).abs() < 1e-12);
        assert_eq!(est.kind, ConstantKind::Equivalent);
    }

    #[test]
    fn scaling_u_by_t_divides_both_branches() {
        for q in [rint(1), rat(1, 2), rint(2)] {
            let problem = unit_fixture(q);
            let t = rat(7, 3);
            let scaled = problem.scale_eta(&t);
            let base = l1_best_constant(&problem, OuterExponent::TheoremA).unwrap();
            let new = l1_best_constant(&scaled, OuterExponent::TheoremA).unwrap();
            let expected = base.value * rat_to_f64(&t.recip());
            assert!(
                (new.value - expected).abs() <= 1e-12 * expected.abs(),
                "q branch broke homogeneity"
            );
        }
    }

    #[test]
    fn reduction_of_unit_fixture() {
        let space = MeasureSpace::uniform(3, rint(1));
        let core = OrderedCore::prefixes(3);
        let cm = CoreMap::from_chain_refs(
            vec!["y1".into(), "y2".into(), "y3".into()],
            vec![rint(1), rint(1), rint(1)],
            &core,
            vec![Some(0), Some(1), Some(2)],
        )
        .unwrap();
        let problem = HardyProblem::new(
            space,
            ScalarField::from_ints(&[5, 2, 3]),
            cm,
            Exponents::new(rint(1), rat(1, 2)).unwrap(),
        )
        .unwrap();
        let red = reduce_to_halfline(&problem).unwrap();
        assert_eq!(red.lambda.atoms(), &[
            (rint(1), rint(1)),
            (rint(2), rint(1)),
            (rint(3), rint(1))
        ]);
        assert_eq!(red.w, LineField::from_ints(&[5, 2, 2]));
        assert!(red.w.is_non_increasing());
    }

    #[test]
    fn reduction_keeps_core_decreasing_weights() {
        let space = MeasureSpace::uniform(3, rint(1));
        let core = OrderedCore::prefixes(3);
        let cm = CoreMap::from_chain_refs(
            vec!["y1".into(), "y2".into(), "y3".into()],
            vec![rint(1), rint(1), rint(1)],
            &core,
            vec![Some(0), Some(1), Some(2)],
        )
        .unwrap();
        let problem = HardyProblem::new(
            space,
            ScalarField::from_ints(&[9, 4, 1]),
            cm,
            Exponents::new(rint(1), rat(1, 2)).unwrap(),
        )
        .unwrap();
        let red = reduce_to_halfline(&problem).unwrap();
        assert_eq!(red.w, LineField::from_ints(&[9, 4, 1]));
    }

    #[test]
    fn halfline_unit_atoms_give_six() {
        let lambda = LineMeasure::new(vec![
            (rint(1), rint(1)),
            (rint(2), rint(1)),
            (rint(3), rint(1)),
        ])
        .unwrap();
        let nu = lambda.clone();
        let w = LineField::from_ints(&[1, 1, 1]);
        let est = halfline_condition(&lambda, &w, &nu, &rat(1, 2), OuterExponent::TheoremA).unwrap();
        assert!((est.value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn halfline_single_atom_closed_form() {
        // one atom of mass 3 with w = 2 at q = 1/2: inner = 3/2, outer sum
        // (3/2)^1 * 3 = 9/2, closed with exponent (1-q)/q = 1.
        let lambda = LineMeasure::new(vec![(rint(1), rint(3))]).unwrap();
        let w = LineField::from_ints(&[2]);
        let est =
            halfline_condition(&lambda, &w, &lambda, &rat(1, 2), OuterExponent::TheoremA).unwrap();
        assert!((est.value - 4.5).abs() < 1e-12);
        let est =
            halfline_condition(&lambda, &w, &lambda, &rat(1, 2), OuterExponent::Stepanov).unwrap();
        assert!((est.value - 4.5f64.powf(2.0)).abs() < 1e-10);
    }

    #[test]
    fn line_minorant_is_prefix_minimum() {
        let w = LineField::from_ints(&[1, 5, 2]);
        assert_eq!(line_minorant(&w), LineField::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn condition_p_le_q_trivial_cases() {
        let space = MeasureSpace::uniform(3, rint(1));
        let core = OrderedCore::prefixes(3);
        let exps = Exponents::new(rint(2), rint(2)).unwrap();
        let zero = condition_p_le_q(
            &space,
            &core,
            &ScalarField::zeros(3),
            &ScalarField::from_ints(&[1, 1, 1]),
            &exps,
        )
        .unwrap();
        assert_eq!(zero.value, 0.0);

        let single = MeasureSpace::uniform(1, rint(1));
        let single_core = OrderedCore::prefixes(1);
        let est = condition_p_le_q(
            &single,
            &single_core,
            &ScalarField::from_ints(&[4]),
            &ScalarField::from_ints(&[1]),
            &exps,
        )
        .unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn condition_q_lt_p_trivial_cases() {
        let space = MeasureSpace::uniform(3, rint(1));
        let core = OrderedCore::prefixes(3);
        let exps = Exponents::new(rint(2), rat(1, 2)).unwrap();
        let zero = condition_q_lt_p(
            &space,
            &core,
            &ScalarField::zeros(3),
            &ScalarField::from_ints(&[1, 1, 1]),
            &exps,
            QltPRegime::QBelowOne,
        )
        .unwrap();
        assert_eq!(zero.value, 0.0);

        let single = MeasureSpace::uniform(1, rint(1));
        let single_core = OrderedCore::prefixes(1);
        let est = condition_q_lt_p(
            &single,
            &single_core,
            &ScalarField::from_ints(&[4]),
            &ScalarField::from_ints(&[1]),
            &exps,
            QltPRegime::QBelowOne,
        )
        .unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn exponent_arithmetic() {
        let e = Exponents::new(rint(2), rat(1, 2)).unwrap();
        assert_eq!(e.p_prime(), ExtRat::from_int(2));
        // 1/r = 2 - 1/2 = 3/2
        assert_eq!(e.r(), Some(rat(2, 3)));
        let e1 = Exponents::new(rint(1), rint(1)).unwrap();
        assert_eq!(e1.p_prime(), ExtRat::Infinite);
        assert!(Exponents::new(rat(1, 2), rint(1)).is_err());
        assert!(Exponents::new(rint(1), rint(0)).is_err());
    }
}
