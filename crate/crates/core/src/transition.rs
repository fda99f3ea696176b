//! Transfer between the abstract space and the half line.
//!
//! The chain induces an atomic measure on `[0,∞)`: layer `i` contributes
//! an atom at position `μ(A_i)` with the layer's mass (zero-mass layers
//! vanish). The maps `R` and `Q` move functions across while preserving
//! integrals over chain sets, which makes the abstract Hardy operator
//! and its half-line counterpart equimeasurable.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{ExtRat, Rat};
use crate::spaces::{items_by_ball_measure, CoreMap, MeasureSpace, OrderedCore, ScalarField};

/// An atomic measure on `[0,∞)`: strictly increasing positions with
/// strictly positive masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineMeasure {
    atoms: Vec<(Rat, Rat)>,
}

impl LineMeasure {
    pub fn new(atoms: Vec<(Rat, Rat)>) -> Result<Self> {
        for (i, (pos, mass)) in atoms.iter().enumerate() {
            if pos < &Rat::zero() {
                return Err(Error::NegativeWeight { what: "line position", index: i });
            }
            if mass <= &Rat::zero() {
                return Err(Error::NegativeWeight { what: "line mass", index: i });
            }
            if i > 0 && atoms[i - 1].0 >= *pos {
                return Err(Error::validation(
                    "line measure",
                    format!("positions not strictly increasing at atom {i}"),
                ));
            }
        }
        Ok(LineMeasure { atoms })
    }

    pub fn empty() -> Self {
        LineMeasure { atoms: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[(Rat, Rat)] {
        &self.atoms
    }

    pub fn position(&self, i: usize) -> &Rat {
        &self.atoms[i].0
    }

    pub fn mass(&self, i: usize) -> &Rat {
        &self.atoms[i].1
    }

    pub fn total_mass(&self) -> Rat {
        self.atoms.iter().map(|(_, m)| m.clone()).sum()
    }

    /// Total mass of `[0,x]`.
    pub fn mass_up_to(&self, x: &Rat) -> Rat {
        self.atoms
            .iter()
            .take_while(|(p, _)| p <= x)
            .map(|(_, m)| m.clone())
            .sum()
    }
}

/// Values attached to the atoms of an associated [`LineMeasure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineField {
    values: Vec<ExtRat>,
}

impl LineField {
    pub fn new(values: Vec<ExtRat>) -> Self {
        LineField { values }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        LineField {
            values: values.iter().map(|&v| ExtRat::from_int(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.values
    }

    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }
}

impl std::ops::Index<usize> for LineField {
    type Output = ExtRat;
    fn index(&self, i: usize) -> &ExtRat {
        &self.values[i]
    }
}

/// Layer/atom bookkeeping shared by the transfer maps.
pub(crate) struct CoreLine {
    pub line: LineMeasure,
    /// Chain position of each surviving atom.
    pub atom_layer: Vec<usize>,
    /// Atom index of each chain position (`None` for zero-mass layers).
    pub layer_atom: Vec<Option<usize>>,
}

pub(crate) fn core_line(core: &OrderedCore, space: &MeasureSpace) -> Result<CoreLine> {
    if core.n_points() != space.len() {
        return Err(Error::LengthMismatch {
            what: "core over space",
            expected: space.len(),
            got: core.n_points(),
        });
    }
    let mut atoms = Vec::new();
    let mut atom_layer = Vec::new();
    let mut layer_atom = Vec::with_capacity(core.len());
    let mut cumulative = Rat::zero();
    for (i, layer) in core.layers().iter().enumerate() {
        let mass: Rat = layer.iter().map(|&s| space.mu(s).clone()).sum();
        if mass.is_zero() {
            layer_atom.push(None);
            continue;
        }
        cumulative += &mass;
        layer_atom.push(Some(atoms.len()));
        atom_layer.push(i);
        atoms.push((cumulative.clone(), mass));
    }
    Ok(CoreLine {
        line: LineMeasure::new(atoms)?,
        atom_layer,
        layer_atom,
    })
}

/// The atomic measure on `[0,∞)` induced by the chain: one atom per
/// positive-mass layer, at position `μ(A_i)` with the layer's mass.
pub fn induced_line_measure(core: &OrderedCore, space: &MeasureSpace) -> Result<LineMeasure> {
    Ok(core_line(core, space)?.line)
}

/// Transfer a field to the line: the value at layer `i`'s atom is the
/// layer average `∫_{layer} f dμ / μ(layer)`.
pub fn r_map(core: &OrderedCore, space: &MeasureSpace, f: &ScalarField) -> Result<LineField> {
    if f.len() != space.len() {
        return Err(Error::LengthMismatch {
            what: "field over space",
            expected: space.len(),
            got: f.len(),
        });
    }
    let cl = core_line(core, space)?;
    let mut values = Vec::with_capacity(cl.line.len());
    for (a, &i) in cl.atom_layer.iter().enumerate() {
        let mut integral = ExtRat::zero();
        for &s in &core.layers()[i] {
            integral = integral.add(&f[s].abs().mul_rat(space.mu(s)));
        }
        let mass = cl.line.mass(a);
        values.push(integral.mul(&ExtRat::Finite(mass.clone()).recip()));
    }
    Ok(LineField::new(values))
}

/// Transfer a line field back to points: each point takes the value at
/// its layer's atom. Points on zero-mass layers take the nearest
/// surviving atom to the left, or the first atom when none exists.
pub fn q_map(core: &OrderedCore, space: &MeasureSpace, phi: &LineField) -> Result<ScalarField> {
    let cl = core_line(core, space)?;
    if phi.len() != cl.line.len() {
        return Err(Error::LengthMismatch {
            what: "line field over atoms",
            expected: cl.line.len(),
            got: phi.len(),
        });
    }
    if cl.line.is_empty() {
        return Ok(ScalarField::zeros(space.len()));
    }
    // nearest surviving atom at or left of each layer, else the first atom
    let mut assigned = Vec::with_capacity(core.len());
    let mut last: Option<usize> = None;
    for j in 0..core.len() {
        if let Some(a) = cl.layer_atom[j] {
            last = Some(a);
        }
        assigned.push(last.unwrap_or(0));
    }
    let mut values = Vec::with_capacity(space.len());
    for s in 0..space.len() {
        let j = core.rank_of(s)?;
        values.push(phi[assigned[j]].clone());
    }
    Ok(ScalarField::new(values))
}

/// Push the item weights forward under `y ↦ μ(B(y))`: one atom per
/// distinct ball measure, with the total weight of its items. Zero-mass
/// atoms are dropped; empty balls land at position zero.
pub fn pushforward_measure(cm: &CoreMap, space: &MeasureSpace) -> Result<LineMeasure> {
    if cm.n_points() != space.len() {
        return Err(Error::LengthMismatch {
            what: "core map over space",
            expected: space.len(),
            got: cm.n_points(),
        });
    }
    let mut atoms = Vec::new();
    for (pos, items) in items_by_ball_measure(cm, space) {
        let mass: Rat = items.iter().map(|&y| cm.tau(y).clone()).sum();
        if !mass.is_zero() {
            atoms.push((pos, mass));
        }
    }
    LineMeasure::new(atoms)
}

/// Total weight where the value strictly exceeds `alpha`.
pub fn distribution(weights: &[Rat], values: &[ExtRat], alpha: &Rat) -> Rat {
    let mut total = Rat::zero();
    for (w, v) in weights.iter().zip(values) {
        if v.cmp_rat(alpha).is_gt() {
            total += w;
        }
    }
    total
}

/// Distribution function of a point field under `μ`.
pub fn scalar_distribution(space: &MeasureSpace, f: &ScalarField, alpha: &Rat) -> Rat {
    distribution(space.mu_values(), f.values(), alpha)
}

/// Distribution function of a line field under its measure.
pub fn line_distribution(line: &LineMeasure, phi: &LineField, alpha: &Rat) -> Rat {
    let masses: Vec<Rat> = line.atoms().iter().map(|(_, m)| m.clone()).collect();
    distribution(&masses, phi.values(), alpha)
}

/// Verify that the running half-line integral of `R f` (against the
/// push-forward of the item weights) and the per-item ball integrals of
/// `f` (against the item weights) share their distribution functions.
///
/// Finitely many thresholds suffice for step functions: the union of
/// both value sets together with zero.
pub fn check_equimeasurable(cm: &CoreMap, space: &MeasureSpace, f: &ScalarField) -> Result<bool> {
    let induced = cm.induced_core(space)?;
    let f0 = induced.restrict_field(&f.abs());
    let cl = core_line(&induced.core, &induced.space)?;
    let rf = r_map(&induced.core, &induced.space, &f0)?;

    let nu = pushforward_measure(cm, space)?;
    // H at a nu position x: integral of Rf over [0,x] against lambda.
    let mut h_values = Vec::with_capacity(nu.len());
    for (pos, _) in nu.atoms() {
        let mut acc = ExtRat::zero();
        for (a, (apos, amass)) in cl.line.atoms().iter().enumerate() {
            if apos <= pos {
                acc = acc.add(&rf[a].mul_rat(amass));
            }
        }
        h_values.push(acc);
    }
    let nu_masses: Vec<Rat> = nu.atoms().iter().map(|(_, m)| m.clone()).collect();

    // T per item: integral of f over the ball.
    let mut t_values = Vec::with_capacity(cm.len());
    for y in 0..cm.len() {
        let mut acc = ExtRat::zero();
        if let Some(ball) = cm.ball_set(y) {
            for &s in ball {
                acc = acc.add(&f[s].abs().mul_rat(space.mu(s)));
            }
        }
        t_values.push(acc);
    }
    let tau: Vec<Rat> = cm.tau_values().to_vec();

    let mut thresholds: BTreeSet<Rat> = BTreeSet::new();
    thresholds.insert(Rat::zero());
    for v in h_values.iter().chain(t_values.iter()) {
        if let Some(r) = v.finite() {
            thresholds.insert(r.clone());
        }
    }
    for alpha in &thresholds {
        let lhs = distribution(&nu_masses, &h_values, alpha);
        let rhs = distribution(&tau, &t_values, alpha);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
