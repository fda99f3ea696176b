//! Greatest core-decreasing minorant and its mass-transport description.
//!
//! On a finite space the minorant of `g` is a prefix minimum along the
//! chain: the value on layer `i` is the least `|g|` seen on any
//! positive-mass point of layers `0..=i`. The same quantity solves the
//! transport problem `inf { ∫ g·u dμ : ∫_A g ≥ ∫_A f for all chain A }`,
//! which [`push_mass_witness`] attains constructively by moving each
//! layer's mass onto the cheapest admissible point.

use crate::error::{Error, Result};
use crate::rational::ExtRat;
use crate::spaces::{MeasureSpace, OrderedCore, ScalarField};

/// The greatest core-decreasing minorant together with its layer values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorantResult {
    /// The minorant as a per-point field.
    pub minorant: ScalarField,
    /// Running prefix minimum per chain position; `∞` before the first
    /// positive-mass point.
    pub per_layer: Vec<ExtRat>,
}

fn check_sizes(core: &OrderedCore, space: &MeasureSpace, f: &ScalarField) -> Result<()> {
    if core.n_points() != space.len() {
        return Err(Error::LengthMismatch {
            what: "core over space",
            expected: space.len(),
            got: core.n_points(),
        });
    }
    if f.len() != space.len() {
        return Err(Error::LengthMismatch {
            what: "field over space",
            expected: space.len(),
            got: f.len(),
        });
    }
    Ok(())
}

/// Greatest core-decreasing minorant of `|g|`.
///
/// Zero-mass points never enter the infimum. Their reported value is the
/// prefix minimum at their own rank when a positive-mass point precedes
/// them, and otherwise the first attained prefix value, which keeps the
/// output a genuine core-decreasing function.
pub fn greatest_minorant(
    core: &OrderedCore,
    space: &MeasureSpace,
    g: &ScalarField,
) -> Result<MinorantResult> {
    check_sizes(core, space, g)?;
    let mut per_layer = Vec::with_capacity(core.len());
    let mut running = ExtRat::Infinite;
    let mut first_attained: Option<usize> = None;
    for (i, layer) in core.layers().iter().enumerate() {
        for &s in layer {
            if space.has_mass(s) {
                if first_attained.is_none() {
                    first_attained = Some(i);
                }
                running = running.min_with(&g[s].abs());
            }
        }
        per_layer.push(running.clone());
    }

    let mut values = Vec::with_capacity(space.len());
    for s in 0..space.len() {
        let j = core.rank_of(s)?;
        let v = if space.has_mass(s) {
            per_layer[j].clone()
        } else {
            match first_attained {
                Some(first) if j < first => per_layer[first].clone(),
                Some(_) => per_layer[j].clone(),
                None => ExtRat::Infinite,
            }
        };
        values.push(v);
    }
    Ok(MinorantResult {
        minorant: ScalarField::new(values),
        per_layer,
    })
}

/// `∫ f·u̲ dμ`, computed exactly with the `0·∞ = 0` convention.
///
/// By the transport description this equals the constrained infimum
/// `inf { ∫ g·u dμ : ∫_A g dμ ≥ ∫_A f dμ for all chain sets A }`; the
/// linear-programming oracle checks that identity independently.
pub fn variational_value(
    core: &OrderedCore,
    space: &MeasureSpace,
    f: &ScalarField,
    u: &ScalarField,
) -> Result<ExtRat> {
    check_sizes(core, space, f)?;
    let minor = greatest_minorant(core, space, u)?;
    let mut total = ExtRat::zero();
    for s in 0..space.len() {
        let term = f[s]
            .abs()
            .mul(&minor.minorant[s])
            .mul_rat(space.mu(s));
        total = total.add(&term);
    }
    Ok(total)
}

/// Constructive witness for the transport infimum.
///
/// Layer by layer, the required incremental mass `∫_{layer i} f dμ` is
/// placed on one positive-mass point minimizing `u` among ranks `≤ i`,
/// ties broken toward the lowest rank and then the lowest point index.
/// The result `g` is feasible (`∫_A g dμ ≥ ∫_A f dμ` for every chain
/// set, in fact with equality) and satisfies `∫ g·u dμ = ∫ f·u̲ dμ`.
pub fn push_mass_witness(
    core: &OrderedCore,
    space: &MeasureSpace,
    f: &ScalarField,
    u: &ScalarField,
) -> Result<ScalarField> {
    check_sizes(core, space, f)?;
    check_sizes(core, space, u)?;
    let mut g = vec![ExtRat::zero(); space.len()];
    // Running minimizer of u over positive-mass points of ranks <= i.
    // First-seen wins on ties, and layers are walked in rank order with
    // sorted points, which realizes the tie-break rule.
    let mut best: Option<(ExtRat, usize)> = None;
    for layer in core.layers() {
        for &s in layer {
            if space.has_mass(s) {
                let value = u[s].abs();
                let better = match &best {
                    None => true,
                    Some((current, _)) => value < *current,
                };
                if better {
                    best = Some((value, s));
                }
            }
        }
        let mut layer_mass = ExtRat::zero();
        for &s in layer {
            layer_mass = layer_mass.add(&f[s].abs().mul_rat(space.mu(s)));
        }
        if !layer_mass.is_zero() {
            let (_, target) = best
                .as_ref()
                .expect("a layer with positive f-mass has a positive-mass point");
            let increment =
                layer_mass.mul(&ExtRat::Finite(space.mu(*target).clone()).recip());
            g[*target] = g[*target].add(&increment);
        }
    }
    Ok(ScalarField::new(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};
    use crate::spaces::MeasureSpace;

    fn unit_space(n: usize) -> MeasureSpace {
        MeasureSpace::uniform(n, rint(1))
    }

    #[test]
    fn prefix_minimum_on_singleton_layers() {
        let core = OrderedCore::prefixes(3);
        let space = unit_space(3);
        let g = ScalarField::from_ints(&[5, 2, 3]);
        let res = greatest_minorant(&core, &space, &g).unwrap();
        assert_eq!(res.minorant, ScalarField::from_ints(&[5, 2, 2]));
        assert!(core.is_core_decreasing(&res.minorant));
    }

    #[test]
    fn constant_functions_are_fixed_points() {
        let core = OrderedCore::prefixes(4);
        let space = unit_space(4);
        let g = ScalarField::from_ints(&[7, 7, 7, 7]);
        let res = greatest_minorant(&core, &space, &g).unwrap();
        assert_eq!(res.minorant, g);
    }

    #[test]
    fn zero_mass_points_do_not_enter_the_infimum() {
        let core = OrderedCore::prefixes(3);
        let space =
            MeasureSpace::new(vec!["s0".into(), "s1".into(), "s2".into()], vec![
                rint(0),
                rint(1),
                rint(1),
            ])
            .unwrap();
        let g = ScalarField::from_ints(&[1, 7, 9]);
        let res = greatest_minorant(&core, &space, &g).unwrap();
        // layer values keep the empty-infimum convention ...
        assert_eq!(res.per_layer, vec![
            ExtRat::Infinite,
            ExtRat::from_int(7),
            ExtRat::from_int(7)
        ]);
        // ... while the reported field adopts the first attained value at
        // the leading zero-mass point.
        assert_eq!(res.minorant, ScalarField::from_ints(&[7, 7, 7]));
        assert!(core.is_core_decreasing(&res.minorant));
    }

    #[test]
    fn variational_value_is_dot_with_minorant() {
        let core = OrderedCore::prefixes(3);
        let space = unit_space(3);
        let f = ScalarField::from_ints(&[1, 1, 1]);
        let u = ScalarField::from_ints(&[5, 2, 3]);
        let v = variational_value(&core, &space, &f, &u).unwrap();
        assert_eq!(v, ExtRat::from_int(9));
    }

    #[test]
    fn variational_value_of_zero_is_zero() {
        let core = OrderedCore::prefixes(3);
        let space = unit_space(3);
        let f = ScalarField::zeros(3);
        let u = ScalarField::from_ints(&[5, 2, 3]);
        assert!(variational_value(&core, &space, &f, &u)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn variational_value_for_core_decreasing_weight() {
        let core = OrderedCore::prefixes(3);
        let space = unit_space(3);
        let f = ScalarField::from_ints(&[2, 1, 1]);
        let u = ScalarField::from_ints(&[5, 4, 1]);
        // u is already core-decreasing, so the value is the plain dot.
        assert_eq!(
            variational_value(&core, &space, &f, &u).unwrap(),
            ExtRat::from_int(2 * 5 + 4 + 1)
        );
    }

    #[test]
    fn witness_moves_mass_to_the_cheap_point() {
        let core = OrderedCore::prefixes(3);
        let space = unit_space(3);
        let f = ScalarField::from_ints(&[1, 1, 1]);
        let u = ScalarField::from_ints(&[5, 2, 3]);
        let g = push_mass_witness(&core, &space, &f, &u).unwrap();
        assert_eq!(g, ScalarField::from_ints(&[1, 2, 0]));
        // objective equals the variational value
        let mut obj = ExtRat::zero();
        for s in 0..3 {
            obj = obj.add(&g[s].mul(&u[s]).mul_rat(space.mu(s)));
        }
        assert_eq!(obj, variational_value(&core, &space, &f, &u).unwrap());
    }

    #[test]
    fn witness_keeps_strictly_decreasing_weights_in_place() {
        let core = OrderedCore::prefixes(3);
        let space = unit_space(3);
        let f = ScalarField::new(vec![
            ExtRat::Finite(rat(1, 2)),
            ExtRat::from_int(3),
            ExtRat::Finite(rat(2, 5)),
        ]);
        let u = ScalarField::from_ints(&[9, 4, 1]);
        let g = push_mass_witness(&core, &space, &f, &u).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn witness_with_mass_on_first_layer_only() {
        let core = OrderedCore::prefixes(3);
        let space = unit_space(3);
        let f = ScalarField::from_ints(&[4, 0, 0]);
        let u = ScalarField::from_ints(&[2, 5, 7]);
        let g = push_mass_witness(&core, &space, &f, &u).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn witness_is_feasible_on_every_prefix() {
        let core = OrderedCore::prefixes(4);
        let space = unit_space(4);
        let f = ScalarField::from_ints(&[2, 0, 5, 1]);
        let u = ScalarField::from_ints(&[3, 1, 4, 4]);
        let g = push_mass_witness(&core, &space, &f, &u).unwrap();
        for a in core.chain() {
            let fa: ExtRat = a.iter().fold(ExtRat::zero(), |acc, &s| {
                acc.add(&f[s].mul_rat(space.mu(s)))
            });
            let ga: ExtRat = a.iter().fold(ExtRat::zero(), |acc, &s| {
                acc.add(&g[s].mul_rat(space.mu(s)))
            });
            assert!(ga >= fa);
        }
    }
}
