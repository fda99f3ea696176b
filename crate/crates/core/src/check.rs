//! Seeded randomized verification suites.
//!
//! Shared by the command-line `verify` subcommand and the acceptance
//! tests. Every suite draws its own deterministic random stream from the
//! configured seed, checks an exact identity (or a bounded empirical
//! ratio) instance by instance, and reports counts instead of panicking.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hardy::{
    halfline_condition, l1_best_constant, reduce_to_halfline, Exponents, HardyProblem,
    OuterExponent,
};
use crate::minorant::{greatest_minorant, push_mass_witness, variational_value};
use crate::oracle::{exact_norm_p1, lp_variational, maximize_ratio, ratio};
use crate::rational::{rat, rat_to_f64, rint, ExtRat, Rat};
use crate::spaces::{CoreMap, MeasureSpace, OrderedCore, ScalarField};
use crate::transition::{check_equimeasurable, core_line, q_map, r_map, LineField};

/// Shared knobs for the randomized suites.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    /// Maximum number of points per instance.
    pub size: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            count: 1000,
            size: 8,
        }
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    /// Human-readable extras: histograms, worst cases, first failures.
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            checked: 0,
            failures: 0,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.failures <= 3 {
                self.notes.push(detail());
            }
        }
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// A rational with numerator and denominator at most 20.
pub fn gen_rat(rng: &mut ChaCha8Rng, allow_zero: bool) -> Rat {
    if allow_zero && rng.random_bool(0.15) {
        return Rat::zero();
    }
    rat(rng.random_range(1..=20), rng.random_range(1..=20))
}

pub fn gen_space(rng: &mut ChaCha8Rng, max_points: usize) -> MeasureSpace {
    let n = rng.random_range(1..=max_points.max(1));
    let mu = (0..n).map(|_| gen_rat(rng, true)).collect();
    let labels = (0..n).map(|i| format!("s{i}")).collect();
    MeasureSpace::new(labels, mu).expect("generated weights are valid")
}

/// A random chain over `n` points with at most six sets.
pub fn gen_chain(rng: &mut ChaCha8Rng, n: usize) -> OrderedCore {
    let k = rng.random_range(1..=n.min(6));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut chain = Vec::with_capacity(k);
    let mut set = BTreeSet::new();
    let mut at = 0;
    for cut in cuts {
        while at < cut {
            set.insert(order[at]);
            at += 1;
        }
        chain.push(set.clone());
    }
    OrderedCore::new(chain, n).expect("generated chain is valid")
}

/// Random items over a chain; empty balls and zero weights included.
pub fn gen_coremap(rng: &mut ChaCha8Rng, core: &OrderedCore) -> CoreMap {
    let m = rng.random_range(1..=core.n_points() + 2);
    let labels = (0..m).map(|y| format!("y{y}")).collect();
    let tau = (0..m).map(|_| gen_rat(rng, true)).collect();
    let refs = (0..m)
        .map(|_| {
            if rng.random_bool(0.1) {
                None
            } else {
                Some(rng.random_range(0..core.len()))
            }
        })
        .collect();
    CoreMap::from_chain_refs(labels, tau, core, refs).expect("chain refs are ordered")
}

pub fn gen_field(rng: &mut ChaCha8Rng, n: usize, allow_zero: bool) -> ScalarField {
    ScalarField::from_rats((0..n).map(|_| gen_rat(rng, allow_zero)).collect())
}

/// A field constant on each layer of the chain.
pub fn gen_measurable_field(rng: &mut ChaCha8Rng, core: &OrderedCore) -> ScalarField {
    let per_layer: Vec<Rat> = (0..core.len()).map(|_| gen_rat(rng, true)).collect();
    let mut values = vec![ExtRat::zero(); core.n_points()];
    for (i, layer) in core.layers().iter().enumerate() {
        for &s in layer {
            values[s] = ExtRat::Finite(per_layer[i].clone());
        }
    }
    ScalarField::new(values)
}

fn gen_problem(rng: &mut ChaCha8Rng, size: usize, q: Rat) -> HardyProblem {
    let space = gen_space(rng, size);
    let core = gen_chain(rng, space.len());
    let cm = gen_coremap(rng, &core);
    let eta = gen_field(rng, space.len(), true);
    HardyProblem::new(space, eta, cm, Exponents::new(Rat::one(), q).unwrap())
        .expect("generated instance is valid")
}

/// Transport duality: the exact linear program equals the minorant dot
/// product on every instance, as rationals.
pub fn suite_duality(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 1);
    let mut report = SuiteReport::new("variational duality");
    for i in 0..cfg.count {
        let space = gen_space(&mut rng, cfg.size.min(10));
        let core = gen_chain(&mut rng, space.len());
        let f = gen_field(&mut rng, space.len(), true);
        let u = gen_field(&mut rng, space.len(), true);
        let direct = variational_value(&core, &space, &f, &u).unwrap();
        let lp = lp_variational(&core, &space, &f, &u).unwrap();
        report.check(direct == ExtRat::Finite(lp.clone()), || {
            format!("instance {i}: formula {direct} vs lp {lp}")
        });
    }
    report
}

/// The pointwise formula against grid enumeration: fold the pointwise
/// maximum of every feasible non-increasing layer assignment drawn from
/// the value grid and compare, layer by layer.
pub fn suite_pointwise(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 2);
    let mut report = SuiteReport::new("pointwise minorant formula");
    for i in 0..cfg.count {
        let space = gen_space(&mut rng, cfg.size.min(10));
        let core = gen_chain(&mut rng, space.len());
        let g = gen_field(&mut rng, space.len(), true);
        let fast = greatest_minorant(&core, &space, &g).unwrap();
        let brute = brute_force_minorant_layers(&core, &space, &g);
        let layers_match = fast.per_layer == brute;
        let field_match = (0..space.len()).all(|s| {
            !space.has_mass(s) || fast.minorant[s] == brute[core.rank_of(s).unwrap()]
        });
        report.check(layers_match && field_match, || {
            format!("instance {i}: fast {:?} vs brute {:?}", fast.per_layer, brute)
        });
    }
    report
}

/// Independent brute force for the minorant: per-layer upper caps from a
/// direct scan, then full enumeration of the non-increasing assignments
/// on the grid of attained values, folded by pointwise maximum.
pub fn brute_force_minorant_layers(
    core: &OrderedCore,
    space: &MeasureSpace,
    g: &ScalarField,
) -> Vec<ExtRat> {
    let mut grid: Vec<ExtRat> = vec![ExtRat::Infinite];
    for s in 0..space.len() {
        if space.has_mass(s) {
            grid.push(g[s].abs());
        }
    }
    grid.sort();
    grid.dedup();
    grid.reverse(); // descending

    let caps: Vec<ExtRat> = core
        .layers()
        .iter()
        .map(|layer| {
            layer
                .iter()
                .filter(|&&s| space.has_mass(s))
                .map(|&s| g[s].abs())
                .min()
                .unwrap_or(ExtRat::Infinite)
        })
        .collect();

    let mut best: Option<Vec<ExtRat>> = None;
    let mut current: Vec<ExtRat> = Vec::with_capacity(core.len());
    enumerate_assignments(&grid, &caps, &mut current, &mut best);
    best.expect("the all-minimal assignment is always feasible")
}

fn enumerate_assignments(
    grid: &[ExtRat],
    caps: &[ExtRat],
    current: &mut Vec<ExtRat>,
    best: &mut Option<Vec<ExtRat>>,
) {
    if current.len() == caps.len() {
        match best {
            None => *best = Some(current.clone()),
            Some(b) => {
                for (bv, cv) in b.iter_mut().zip(current.iter()) {
                    if cv > bv {
                        *bv = cv.clone();
                    }
                }
            }
        }
        return;
    }
    let i = current.len();
    for value in grid {
        if let Some(prev) = current.last() {
            if value > prev {
                continue;
            }
        }
        if value > &caps[i] {
            continue;
        }
        current.push(value.clone());
        enumerate_assignments(grid, caps, current, best);
        current.pop();
    }
}

/// Exact identities for the transfer maps.
pub fn suite_transition(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 3);
    let mut report = SuiteReport::new("transfer-map identities");
    for i in 0..cfg.count {
        let space = gen_space(&mut rng, cfg.size);
        let core = gen_chain(&mut rng, space.len());
        let cl = core_line(&core, &space).unwrap();
        let atoms = cl.line.len();

        // (i) R(Q(phi)) = phi at every atom
        let phi = LineField::new((0..atoms).map(|_| ExtRat::Finite(gen_rat(&mut rng, true))).collect());
        let rq = r_map(&core, &space, &q_map(&core, &space, &phi).unwrap()).unwrap();
        report.check(rq == phi, || format!("instance {i}: R(Q(phi)) != phi"));

        // (ii) Q(R(f)) = f at positive-mass points for measurable f
        let f_meas = gen_measurable_field(&mut rng, &core);
        let qr = q_map(&core, &space, &r_map(&core, &space, &f_meas).unwrap()).unwrap();
        let ok = (0..space.len()).all(|s| !space.has_mass(s) || qr[s] == f_meas[s]);
        report.check(ok, || format!("instance {i}: Q(R(f)) != f on a massive point"));

        // (iii) prefix integrals transfer exactly, for arbitrary f
        let f = gen_field(&mut rng, space.len(), true);
        let qphi = q_map(&core, &space, &phi).unwrap();
        let rf = r_map(&core, &space, &f).unwrap();
        let mut ok = true;
        for (j, set) in core.chain().iter().enumerate() {
            let mut lhs = ExtRat::zero();
            for &s in set {
                lhs = lhs.add(&f[s].mul(&qphi[s]).mul_rat(space.mu(s)));
            }
            let bound = space.mass_of(set.iter());
            let mut rhs = ExtRat::zero();
            for (a, (pos, mass)) in cl.line.atoms().iter().enumerate() {
                if pos <= &bound {
                    rhs = rhs.add(&rf[a].mul(&phi[a]).mul_rat(mass));
                }
            }
            if lhs != rhs {
                ok = false;
                let _ = j;
                break;
            }
        }
        report.check(ok, || format!("instance {i}: prefix transfer failed"));

        // (iv) R is multiplicative on measurable fields
        let g_meas = gen_measurable_field(&mut rng, &core);
        let prod = ScalarField::new(
            (0..space.len())
                .map(|s| f_meas[s].mul(&g_meas[s]))
                .collect(),
        );
        let r_prod = r_map(&core, &space, &prod).unwrap();
        let r_f = r_map(&core, &space, &f_meas).unwrap();
        let r_g = r_map(&core, &space, &g_meas).unwrap();
        let ok = (0..atoms).all(|a| r_prod[a] == r_f[a].mul(&r_g[a]));
        report.check(ok, || format!("instance {i}: R(fg) != R(f)R(g)"));

        // (v) equal prefix integrals force equality for measurable fields
        let rebuilt = q_map(&core, &space, &r_map(&core, &space, &f_meas).unwrap()).unwrap();
        let same_integrals = core.chain().iter().all(|set| {
            let mut a = ExtRat::zero();
            let mut b = ExtRat::zero();
            for &s in set {
                a = a.add(&f_meas[s].mul_rat(space.mu(s)));
                b = b.add(&rebuilt[s].mul_rat(space.mu(s)));
            }
            a == b
        });
        let equal_ae =
            (0..space.len()).all(|s| !space.has_mass(s) || rebuilt[s] == f_meas[s]);
        report.check(same_integrals && equal_ae, || {
            format!("instance {i}: integral characterization failed")
        });

        // perturbing one massive layer must change some prefix integral
        if let Some((j, _)) = core
            .layers()
            .iter()
            .enumerate()
            .find(|(_, layer)| layer.iter().any(|&s| space.has_mass(s)))
        {
            let mut bumped = f_meas.values().to_vec();
            for &s in &core.layers()[j] {
                bumped[s] = bumped[s].add(&ExtRat::from_int(1));
            }
            let bumped = ScalarField::new(bumped);
            let differs = core.chain().iter().any(|set| {
                let mut a = ExtRat::zero();
                let mut b = ExtRat::zero();
                for &s in set {
                    a = a.add(&f_meas[s].mul_rat(space.mu(s)));
                    b = b.add(&bumped[s].mul_rat(space.mu(s)));
                }
                a != b
            });
            report.check(differs, || {
                format!("instance {i}: perturbed layer left all integrals fixed")
            });
        }
    }
    report
}

/// The half-line transfer preserves distribution functions exactly.
pub fn suite_equimeasurable(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 4);
    let mut report = SuiteReport::new("equimeasurability");
    for i in 0..cfg.count {
        let space = gen_space(&mut rng, cfg.size);
        let core = gen_chain(&mut rng, space.len());
        let cm = gen_coremap(&mut rng, &core);
        let f = gen_field(&mut rng, space.len(), true);
        let ok = check_equimeasurable(&cm, &space, &f).unwrap();
        report.check(ok, || format!("instance {i}: distributions diverged"));
    }
    report
}

/// Transport witness: feasibility and exact attainment of the infimum.
pub fn suite_witness(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 5);
    let mut report = SuiteReport::new("mass-transport witness");
    for i in 0..cfg.count {
        let space = gen_space(&mut rng, cfg.size.min(10));
        let core = gen_chain(&mut rng, space.len());
        let f = gen_field(&mut rng, space.len(), true);
        let u = gen_field(&mut rng, space.len(), true);
        let g = push_mass_witness(&core, &space, &f, &u).unwrap();
        let feasible = core.chain().iter().all(|set| {
            let mut fa = ExtRat::zero();
            let mut ga = ExtRat::zero();
            for &s in set {
                fa = fa.add(&f[s].mul_rat(space.mu(s)));
                ga = ga.add(&g[s].mul_rat(space.mu(s)));
            }
            ga >= fa
        });
        let mut objective = ExtRat::zero();
        for s in 0..space.len() {
            objective = objective.add(&g[s].mul(&u[s]).mul_rat(space.mu(s)));
        }
        let target = variational_value(&core, &space, &f, &u).unwrap();
        report.check(feasible && objective == target, || {
            format!("instance {i}: witness objective {objective} vs target {target}")
        });
    }
    report
}

/// The dual supremum against the point-mass oracle, plus invariance
/// under replacing the weight by its minorant.
pub fn suite_best_constant_exact(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 6);
    let mut report = SuiteReport::new("dual supremum vs point masses");
    let qs = [rint(1), rat(3, 2), rint(2), rint(3)];
    for i in 0..cfg.count {
        let q = qs[i % qs.len()].clone();
        let problem = gen_problem(&mut rng, cfg.size, q.clone());
        let est = l1_best_constant(&problem, OuterExponent::TheoremA).unwrap();
        let norm = exact_norm_p1(&problem).unwrap();
        let agree = if q.is_one() {
            est.exact == norm.exact
        } else {
            match (est.value.is_infinite(), norm.value.is_infinite()) {
                (true, true) => true,
                (false, false) => {
                    (est.value - norm.value).abs() <= 1e-12 * est.value.abs().max(norm.value.abs())
                }
                _ => false,
            }
        };
        report.check(agree, || {
            format!(
                "instance {i} (q = {q}): formula {} vs oracle {}",
                est.value, norm.value
            )
        });

        // replacing the weight by its minorant leaves the value fixed
        let invariant = minorant_invariant_problem(&problem);
        let est2 = l1_best_constant(&invariant, OuterExponent::TheoremA).unwrap();
        let fixed = if q.is_one() {
            est.exact == est2.exact
        } else {
            est.value.to_bits() == est2.value.to_bits()
        };
        report.check(fixed, || {
            format!(
                "instance {i} (q = {q}): minorant replacement moved {} to {}",
                est.value, est2.value
            )
        });
    }
    report
}

/// The same instance with `η` rebuilt from the minorant of its density.
pub fn minorant_invariant_problem(problem: &HardyProblem) -> HardyProblem {
    let pre = crate::hardy::prepare(problem).unwrap();
    let mut eta = problem.eta.values().to_vec();
    for (new_idx, &old_idx) in pre.induced.kept.iter().enumerate() {
        let ubar = &pre.minor.minorant[new_idx];
        eta[old_idx] = ubar.mul_rat(problem.space.mu(old_idx));
    }
    HardyProblem::new(
        problem.space.clone(),
        ScalarField::new(eta),
        problem.cm.clone(),
        problem.exps.clone(),
    )
    .expect("minorant weights are valid")
}

/// Identity between the double sum in outer-index coordinates and the
/// half-line criterion after reduction, for `q ∈ (0,1)`.
pub fn suite_reduction_identity(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 7);
    let mut report = SuiteReport::new("half-line reduction identity");
    let qs = [rat(1, 4), rat(1, 2), rat(3, 4)];
    for i in 0..cfg.count {
        let q = qs[i % qs.len()].clone();
        let problem = gen_problem(&mut rng, cfg.size, q.clone());
        for outer in [OuterExponent::TheoremA, OuterExponent::Stepanov] {
            let est = l1_best_constant(&problem, outer).unwrap();
            if est.value.is_infinite() {
                let red = reduce_to_halfline(&problem);
                let consistent = match red {
                    Err(crate::Error::SingularEta) => true,
                    Ok(red) => halfline_condition(&red.lambda, &red.w, &red.nu, &q, outer)
                        .unwrap()
                        .value
                        .is_infinite(),
                    Err(_) => false,
                };
                report.check(consistent, || {
                    format!("instance {i} (q = {q}): infinite cases diverged")
                });
                continue;
            }
            let red = reduce_to_halfline(&problem).unwrap();
            let step = halfline_condition(&red.lambda, &red.w, &red.nu, &q, outer).unwrap();
            let ok = (est.value - step.value).abs()
                <= 1e-12 * est.value.abs().max(step.value.abs()).max(1e-300);
            report.check(ok, || {
                format!(
                    "instance {i} (q = {q}, {:?}): direct {} vs reduced {}",
                    outer, est.value, step.value
                )
            });
        }
    }
    report
}

/// Homogeneity of every formula in the item weights and in the weight
/// density.
pub fn suite_scaling(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 8);
    let mut report = SuiteReport::new("scaling laws");
    let qs = [rat(1, 4), rat(1, 2), rat(3, 4), rint(1), rint(2)];
    let ts = [rat(3, 2), rint(7), rat(1, 3)];
    for i in 0..cfg.count {
        let q = qs[i % qs.len()].clone();
        let t = ts[i % ts.len()].clone();
        let problem = gen_problem(&mut rng, cfg.size, q.clone());
        let base = l1_best_constant(&problem, OuterExponent::TheoremA).unwrap();

        let tau_scaled = l1_best_constant(&problem.scale_tau(&t), OuterExponent::TheoremA).unwrap();
        let factor = rat_to_f64(&t).powf(rat_to_f64(&q.recip()));
        report.check(close_or_both_infinite(tau_scaled.value, base.value * factor), || {
            format!(
                "instance {i} (q = {q}): tau scaling gave {} expected {}",
                tau_scaled.value,
                base.value * factor
            )
        });

        let eta_scaled = l1_best_constant(&problem.scale_eta(&t), OuterExponent::TheoremA).unwrap();
        let expected = base.value * rat_to_f64(&t.recip());
        report.check(close_or_both_infinite(eta_scaled.value, expected), || {
            format!(
                "instance {i} (q = {q}): eta scaling gave {} expected {}",
                eta_scaled.value, expected
            )
        });

        if q >= Rat::one() {
            let norm = exact_norm_p1(&problem).unwrap();
            let scaled_norm = exact_norm_p1(&problem.scale_tau(&t)).unwrap();
            report.check(
                close_or_both_infinite(scaled_norm.value, norm.value * factor),
                || format!("instance {i} (q = {q}): oracle tau scaling failed"),
            );
        }
    }
    report
}

fn close_or_both_infinite(a: f64, b: f64) -> bool {
    match (a.is_infinite(), b.is_infinite()) {
        (true, true) => true,
        (false, false) => (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300),
        _ => false,
    }
}

/// Report of the empirical two-sided comparison between the `q < 1`
/// estimate and the searched lower bound.
#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub report: SuiteReport,
    /// Counts of `max(est/lower, lower/est)` per dyadic bucket
    /// `[1,2), [2,4), [4,8), [8,16), [16,32), [32,∞)`.
    pub histogram: [usize; 6],
    pub worst: f64,
}

/// Draw nondegenerate `q < 1` instances (finite positive estimate and
/// lower bound) and verify the two quantities stay within a factor of
/// `bound` of each other.
pub fn suite_sandwich(cfg: &SuiteConfig, bound: f64) -> SandwichReport {
    let mut rng = rng_for(cfg.seed, 9);
    let mut report = SuiteReport::new("two-sided sandwich (q < 1)");
    let mut histogram = [0usize; 6];
    let mut worst = 1.0f64;
    let qs = [rat(1, 4), rat(1, 2), rat(3, 4)];
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < cfg.count && attempts < cfg.count * 40 {
        attempts += 1;
        let q = qs[accepted % qs.len()].clone();
        let problem = gen_problem(&mut rng, cfg.size, q);
        let est = l1_best_constant(&problem, OuterExponent::TheoremA).unwrap();
        if !est.value.is_finite() || est.value == 0.0 {
            continue;
        }
        let search = maximize_ratio(&problem, 2, 600, cfg.seed.wrapping_add(accepted as u64));
        if !search.lower_bound.is_finite() || search.lower_bound == 0.0 {
            continue;
        }
        accepted += 1;
        let ratio = (est.value / search.lower_bound).max(search.lower_bound / est.value);
        worst = worst.max(ratio);
        let bucket = if ratio < 2.0 {
            0
        } else if ratio < 4.0 {
            1
        } else if ratio < 8.0 {
            2
        } else if ratio < 16.0 {
            3
        } else if ratio < 32.0 {
            4
        } else {
            5
        };
        histogram[bucket] += 1;
        report.check(ratio < bound, || {
            format!("instance {accepted}: sandwich ratio {ratio:.3} exceeds {bound}")
        });
    }
    report.notes.push(format!(
        "histogram [1,2):{} [2,4):{} [4,8):{} [8,16):{} [16,32):{} [32,inf):{}",
        histogram[0], histogram[1], histogram[2], histogram[3], histogram[4], histogram[5]
    ));
    report.notes.push(format!("worst ratio {worst:.6}"));
    SandwichReport {
        report,
        histogram,
        worst,
    }
}

/// Constructed singular instances: a positive-mass point with no `η`
/// weight inside a ball of positive item weight must blow the constant
/// up, both in the formulas and under a targeted point mass.
pub fn suite_singularity(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 10);
    let mut report = SuiteReport::new("singular weight detection");
    for i in 0..cfg.count {
        let qs = [rat(1, 2), rint(1), rint(2)];
        let q = qs[i % qs.len()].clone();
        // force a positive-mass point
        let space = loop {
            let space = gen_space(&mut rng, cfg.size);
            if (0..space.len()).any(|s| space.has_mass(s)) {
                break space;
            }
        };
        let core = gen_chain(&mut rng, space.len());
        let mut cm = gen_coremap(&mut rng, &core);
        let target = (0..space.len())
            .find(|&s| space.has_mass(s))
            .expect("space has mass");
        // item weights must reach the target: add a full-chain item
        {
            let mut labels: Vec<String> = (0..cm.len()).map(|y| cm.label(y).to_string()).collect();
            labels.push("forced".into());
            let mut tau: Vec<Rat> = cm.tau_values().to_vec();
            tau.push(rint(1));
            let mut refs: Vec<Option<usize>> = (0..cm.len()).map(|y| cm.ball_index(y)
                .map(|d| core.chain().iter().position(|c| c == &cm.distinct_sets()[d]).unwrap()))
                .collect();
            refs.push(Some(core.len() - 1));
            cm = CoreMap::from_chain_refs(labels, tau, &core, refs).unwrap();
        }
        let mut eta = gen_field(&mut rng, space.len(), true).values().to_vec();
        eta[target] = ExtRat::zero();
        let problem = HardyProblem::new(
            space,
            ScalarField::new(eta),
            cm,
            Exponents::new(Rat::one(), q).unwrap(),
        )
        .unwrap();

        let decomp = crate::hardy::decompose_eta(&problem);
        let est = l1_best_constant(&problem, OuterExponent::TheoremA).unwrap();
        let mut mass = vec![ExtRat::zero(); problem.space.len()];
        mass[target] = ExtRat::from_int(1);
        let targeted = ratio(&problem, &ScalarField::new(mass));
        report.check(
            decomp.infinite && est.value.is_infinite() && targeted > 1e6,
            || {
                format!(
                    "instance {i}: flag {} estimate {} targeted {}",
                    decomp.infinite, est.value, targeted
                )
            },
        );
    }
    report
}

/// All suites with the configured count, in a deterministic order.
pub fn run_all(cfg: &SuiteConfig, sandwich_bound: f64) -> Vec<SuiteReport> {
    let mut out = vec![
        suite_duality(cfg),
        suite_pointwise(cfg),
        suite_transition(cfg),
        suite_equimeasurable(cfg),
        suite_witness(cfg),
        suite_best_constant_exact(cfg),
        suite_reduction_identity(cfg),
        suite_scaling(cfg),
    ];
    let sandwich_cfg = SuiteConfig {
        count: cfg.count / 2,
        ..*cfg
    };
    out.push(suite_sandwich(&sandwich_cfg, sandwich_bound).report);
    out.push(suite_singularity(&SuiteConfig {
        count: cfg.count.min(100),
        ..*cfg
    }));
    out
}
