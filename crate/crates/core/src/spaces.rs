//! Finite measure spaces, ordered cores, and core maps.
//!
//! An [`OrderedCore`] is a strictly nested chain of subsets whose last
//! entry is the whole point set. It induces a total preorder on points:
//! `u ≤ v` when every chain set containing `v` also contains `u`. The
//! preorder classes are the *layers* (set differences of consecutive
//! chain entries), and a function is *core-decreasing* when it is
//! constant on layers and non-increasing along them.
//!
//! A [`CoreMap`] attaches an outer index set with weights to the chain:
//! each item points at one chain set (its *ball*) or at the empty set.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{ExtRat, Rat};

/// A finite set of labelled points with exact non-negative weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureSpace {
    labels: Vec<String>,
    mu: Vec<Rat>,
}

impl MeasureSpace {
    pub fn new(labels: Vec<String>, mu: Vec<Rat>) -> Result<Self> {
        if labels.len() != mu.len() {
            return Err(Error::LengthMismatch {
                what: "measure weights",
                expected: labels.len(),
                got: mu.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for (i, w) in mu.iter().enumerate() {
            if w < &Rat::zero() {
                return Err(Error::NegativeWeight { what: "mu", index: i });
            }
        }
        Ok(MeasureSpace { labels, mu })
    }

    /// A space with `n` points `s0..s{n-1}`, all of weight `w`.
    pub fn uniform(n: usize, w: Rat) -> Self {
        let labels = (0..n).map(|i| format!("s{i}")).collect();
        MeasureSpace {
            labels,
            mu: vec![w; n],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mu(&self, i: usize) -> &Rat {
        &self.mu[i]
    }

    pub fn mu_values(&self) -> &[Rat] {
        &self.mu
    }

    pub fn has_mass(&self, i: usize) -> bool {
        !self.mu[i].is_zero()
    }

    pub fn total_mass(&self) -> Rat {
        self.mu.iter().sum()
    }

    pub fn mass_of<'a>(&self, points: impl IntoIterator<Item = &'a usize>) -> Rat {
        points.into_iter().map(|&s| self.mu[s].clone()).sum()
    }

    /// The subspace on `keep` (strictly increasing indices), preserving order.
    pub fn restrict(&self, keep: &[usize]) -> MeasureSpace {
        MeasureSpace {
            labels: keep.iter().map(|&s| self.labels[s].clone()).collect(),
            mu: keep.iter().map(|&s| self.mu[s].clone()).collect(),
        }
    }
}

/// A per-point assignment of extended non-negative rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarField {
    values: Vec<ExtRat>,
}

impl ScalarField {
    pub fn new(values: Vec<ExtRat>) -> Self {
        ScalarField { values }
    }

    pub fn from_rats(values: Vec<Rat>) -> Self {
        ScalarField {
            values: values.into_iter().map(ExtRat::Finite).collect(),
        }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        ScalarField {
            values: values
                .iter()
                .map(|&v| ExtRat::Finite(Rat::from_integer(v.into())))
                .collect(),
        }
    }

    pub fn constant(n: usize, v: ExtRat) -> Self {
        ScalarField {
            values: vec![v; n],
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, ExtRat::zero())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> &ExtRat {
        &self.values[i]
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.values
    }

    pub fn abs(&self) -> ScalarField {
        ScalarField {
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> ScalarField {
        ScalarField {
            values: self.values.iter().map(|v| v.mul_rat(c)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExtRat> {
        self.values.iter()
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64()).collect()
    }
}

impl std::ops::Index<usize> for ScalarField {
    type Output = ExtRat;
    fn index(&self, i: usize) -> &ExtRat {
        &self.values[i]
    }
}

/// A strictly nested chain of point sets covering the whole space.
///
/// The empty set is an implicit first member and is never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedCore {
    chain: Vec<BTreeSet<usize>>,
    layers: Vec<Vec<usize>>,
    rank: Vec<usize>,
    n_points: usize,
}

impl OrderedCore {
    pub fn new(chain: Vec<BTreeSet<usize>>, n_points: usize) -> Result<Self> {
        for set in &chain {
            if let Some(&s) = set.iter().next_back() {
                if s >= n_points {
                    return Err(Error::PointIndex(s, n_points));
                }
            }
        }
        for (i, set) in chain.iter().enumerate() {
            let prev_len = if i == 0 { 0 } else { chain[i - 1].len() };
            let nested = i == 0 || chain[i - 1].is_subset(set);
            if !nested || set.len() <= prev_len {
                return Err(Error::ChainNotNested(i));
            }
        }
        let covered = chain.last().map_or(0, |s| s.len());
        if covered != n_points {
            return Err(Error::ChainNotFull);
        }

        let mut rank = vec![usize::MAX; n_points];
        let mut layers = Vec::with_capacity(chain.len());
        for (i, set) in chain.iter().enumerate() {
            let mut layer = Vec::new();
            for &s in set {
                if rank[s] == usize::MAX {
                    rank[s] = i;
                    layer.push(s);
                }
            }
            layers.push(layer);
        }
        Ok(OrderedCore {
            chain,
            layers,
            rank,
            n_points,
        })
    }

    /// Chain built from the prefixes `{0}, {0,1}, …, {0..n-1}`.
    pub fn prefixes(n: usize) -> Self {
        let chain = (1..=n).map(|k| (0..k).collect()).collect();
        OrderedCore::new(chain, n).expect("prefix chain is always valid")
    }

    pub fn chain(&self) -> &[BTreeSet<usize>] {
        &self.chain
    }

    /// Number of chain sets.
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// The layer `A_i \ A_{i-1}` for each chain position, in point order.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Index of the first chain set containing `s`.
    pub fn rank_of(&self, s: usize) -> Result<usize> {
        if s >= self.n_points {
            return Err(Error::PointIndex(s, self.n_points));
        }
        Ok(self.rank[s])
    }

    /// The core-induced order: `u ≤ v` iff every chain set containing `v`
    /// contains `u`, i.e. `rank(u) ≤ rank(v)`.
    pub fn leq(&self, u: usize, v: usize) -> Result<bool> {
        Ok(self.rank_of(u)? <= self.rank_of(v)?)
    }

    /// True iff `f` is constant on every layer and the layer constants
    /// are non-increasing along the chain.
    pub fn is_core_decreasing(&self, f: &ScalarField) -> bool {
        assert_eq!(f.len(), self.n_points, "field/space size mismatch");
        let mut prev: Option<ExtRat> = None;
        for layer in &self.layers {
            let mut value: Option<&ExtRat> = None;
            for &s in layer {
                match value {
                    None => value = Some(&f[s]),
                    Some(v) if v == &f[s] => {}
                    Some(_) => return false,
                }
            }
            let v = value.expect("layers are nonempty").clone();
            if let Some(p) = &prev {
                if &v > p {
                    return false;
                }
            }
            prev = Some(v);
        }
        true
    }

    /// True iff `set` is closed downward under the core order, which in
    /// the finite setting characterizes membership in the maximal core.
    pub fn is_down_set(&self, set: &BTreeSet<usize>) -> bool {
        let max_rank = match set.iter().map(|&s| self.rank[s]).max() {
            Some(r) => r,
            None => return true, // the empty set
        };
        (0..self.n_points).all(|s| self.rank[s] > max_rank || set.contains(&s))
    }
}

/// An outer index set with weights, each item pointing at a chain set
/// (or at the empty set). The referenced sets are totally ordered by
/// inclusion; this is validated at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreMap {
    labels: Vec<String>,
    tau: Vec<Rat>,
    distinct: Vec<BTreeSet<usize>>,
    ball: Vec<Option<usize>>,
    n_points: usize,
}

impl CoreMap {
    /// Build from explicit ball sets (`None` meaning the empty set).
    pub fn new(
        labels: Vec<String>,
        tau: Vec<Rat>,
        balls: Vec<Option<BTreeSet<usize>>>,
        n_points: usize,
    ) -> Result<Self> {
        if labels.len() != tau.len() || labels.len() != balls.len() {
            return Err(Error::LengthMismatch {
                what: "core map items",
                expected: labels.len(),
                got: tau.len().max(balls.len()),
            });
        }
        for (i, w) in tau.iter().enumerate() {
            if w < &Rat::zero() {
                return Err(Error::NegativeWeight { what: "tau", index: i });
            }
        }
        let mut distinct: Vec<BTreeSet<usize>> = Vec::new();
        for b in balls.iter().flatten() {
            if let Some(&s) = b.iter().next_back() {
                if s >= n_points {
                    return Err(Error::PointIndex(s, n_points));
                }
            }
            if !b.is_empty() && !distinct.contains(b) {
                distinct.push(b.clone());
            }
        }
        distinct.sort_by_key(|s| s.len());
        for pair in distinct.windows(2) {
            if !pair[0].is_subset(&pair[1]) {
                return Err(Error::BallsNotOrdered);
            }
        }
        let ball = balls
            .iter()
            .map(|b| match b {
                Some(set) if !set.is_empty() => distinct.iter().position(|d| d == set),
                _ => None,
            })
            .collect();
        Ok(CoreMap {
            labels,
            tau,
            distinct,
            ball,
            n_points,
        })
    }

    /// Build by referencing an existing chain (`None` = empty ball).
    pub fn from_chain_refs(
        labels: Vec<String>,
        tau: Vec<Rat>,
        core: &OrderedCore,
        refs: Vec<Option<usize>>,
    ) -> Result<Self> {
        let balls = refs
            .into_iter()
            .map(|r| match r {
                Some(i) => {
                    if i >= core.len() {
                        Err(Error::ChainIndex(i, core.len()))
                    } else {
                        Ok(Some(core.chain()[i].clone()))
                    }
                }
                None => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        CoreMap::new(labels, tau, balls, core.n_points())
    }

    /// Number of items in the outer index set.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn label(&self, y: usize) -> &str {
        &self.labels[y]
    }

    pub fn tau(&self, y: usize) -> &Rat {
        &self.tau[y]
    }

    pub fn tau_values(&self) -> &[Rat] {
        &self.tau
    }

    /// The distinct nonempty ball sets, sorted by inclusion.
    pub fn distinct_sets(&self) -> &[BTreeSet<usize>] {
        &self.distinct
    }

    /// Index of item `y`'s ball within [`Self::distinct_sets`].
    pub fn ball_index(&self, y: usize) -> Option<usize> {
        self.ball[y]
    }

    pub fn ball_set(&self, y: usize) -> Option<&BTreeSet<usize>> {
        self.ball[y].map(|i| &self.distinct[i])
    }

    /// Whether point `s` lies in item `y`'s ball.
    pub fn contains(&self, y: usize, s: usize) -> bool {
        self.ball_set(y).is_some_and(|b| b.contains(&s))
    }

    /// `μ(B(y))`, with the empty ball contributing `0`.
    pub fn ball_measure(&self, y: usize, space: &MeasureSpace) -> Rat {
        match self.ball_set(y) {
            Some(b) => space.mass_of(b.iter()),
            None => Rat::zero(),
        }
    }

    /// `τ({y : s ∈ B(y)})`.
    pub fn tau_reach(&self, s: usize) -> Rat {
        (0..self.len())
            .filter(|&y| self.contains(y, s))
            .map(|y| self.tau[y].clone())
            .sum()
    }

    /// Scale every item weight by `t`.
    pub fn scale_tau(&self, t: &Rat) -> CoreMap {
        CoreMap {
            labels: self.labels.clone(),
            tau: self.tau.iter().map(|w| w * t).collect(),
            distinct: self.distinct.clone(),
            ball: self.ball.clone(),
            n_points: self.n_points,
        }
    }

    /// The ordered core generated by the distinct balls.
    ///
    /// When the balls cover only part of the space, the core lives on the
    /// restriction of the space to the covered part; `point_map` records
    /// the reindexing.
    pub fn induced_core(&self, space: &MeasureSpace) -> Result<InducedCore> {
        if space.len() != self.n_points {
            return Err(Error::LengthMismatch {
                what: "core map space",
                expected: self.n_points,
                got: space.len(),
            });
        }
        let union: BTreeSet<usize> = match self.distinct.last() {
            Some(top) => top.clone(),
            None => BTreeSet::new(),
        };
        let restricted = union.len() != self.n_points;
        let kept: Vec<usize> = union.iter().copied().collect();
        let mut point_map = vec![None; self.n_points];
        for (new, &old) in kept.iter().enumerate() {
            point_map[old] = Some(new);
        }
        let sub_space = space.restrict(&kept);
        let chain: Vec<BTreeSet<usize>> = self
            .distinct
            .iter()
            .map(|set| set.iter().map(|s| point_map[*s].unwrap()).collect())
            .collect();
        let core = OrderedCore::new(chain, kept.len())?;
        Ok(InducedCore {
            space: sub_space,
            core,
            point_map,
            kept,
            ball_rank: self.ball.clone(),
            restricted,
        })
    }
}

/// Result of [`CoreMap::induced_core`]: the deduplicated chain, living on
/// the (possibly restricted) covered subspace.
#[derive(Clone, Debug)]
pub struct InducedCore {
    /// The restriction of the original space to the union of the balls.
    pub space: MeasureSpace,
    /// The chain of distinct balls, reindexed into `space`.
    pub core: OrderedCore,
    /// Old point index → new index, `None` when the point was dropped.
    pub point_map: Vec<Option<usize>>,
    /// New index → old point index.
    pub kept: Vec<usize>,
    /// For each item, the chain position of its ball (`None` = empty).
    pub ball_rank: Vec<Option<usize>>,
    /// Whether any point was dropped.
    pub restricted: bool,
}

impl InducedCore {
    /// Transport a field on the original space to the restricted one.
    pub fn restrict_field(&self, f: &ScalarField) -> ScalarField {
        ScalarField::new(self.kept.iter().map(|&s| f[s].clone()).collect())
    }

    /// Tail sums of the item weights by chain rank: entry `j` is
    /// `τ({y : ball_rank(y) ≥ j})`, so that `τ({y : s ∈ B(y)})` is the
    /// entry at `rank(s)`.
    pub fn tau_tail(&self, tau: &[Rat]) -> Vec<Rat> {
        let k = self.core.len();
        let mut by_rank = vec![Rat::zero(); k];
        for (y, rank) in self.ball_rank.iter().enumerate() {
            if let Some(j) = rank {
                by_rank[*j] += &tau[y];
            }
        }
        let mut tail = vec![Rat::zero(); k];
        let mut acc = Rat::zero();
        for j in (0..k).rev() {
            acc += &by_rank[j];
            tail[j] = acc.clone();
        }
        tail
    }
}

/// Group items of a core map by the measure of their balls, ascending.
/// Items with empty balls group at position zero.
pub(crate) fn items_by_ball_measure(
    cm: &CoreMap,
    space: &MeasureSpace,
) -> Vec<(Rat, Vec<usize>)> {
    let mut groups: BTreeMap<Rat, Vec<usize>> = BTreeMap::new();
    for y in 0..cm.len() {
        groups.entry(cm.ball_measure(y, space)).or_default().push(y);
    }
    groups.into_iter().collect()
}
