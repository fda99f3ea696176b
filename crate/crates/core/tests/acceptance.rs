//! Acceptance suite.
//!
//! Each test runs one acceptance criterion at its stated instance count
//! and tolerance and prints a single pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use hardy_core::check::{
    suite_best_constant_exact, suite_duality, suite_equimeasurable, suite_pointwise,
    suite_reduction_identity, suite_sandwich, suite_scaling, suite_singularity, suite_witness,
    SuiteConfig, SuiteReport,
};
use hardy_core::hardy::{condition_p_le_q, Exponents, HardyProblem};
use hardy_core::oracle::maximize_ratio;
use hardy_core::rational::{rat, rint, Rat};
use hardy_core::spaces::{CoreMap, MeasureSpace, OrderedCore, ScalarField};

const SEED: u64 = 42;

fn announce(name: &str, ok: bool, detail: String) {
    println!(
        "[acceptance] {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "{name}: {detail}");
}

fn announce_suite(name: &str, report: &SuiteReport, elapsed_limit: Option<(f64, f64)>) {
    let mut detail = format!("{}/{} instances", report.checked - report.failures, report.checked);
    let mut ok = report.passed();
    if let Some((elapsed, limit)) = elapsed_limit {
        detail.push_str(&format!(", {elapsed:.1}s of {limit:.0}s allowed"));
        ok = ok && elapsed < limit;
    }
    if !report.passed() {
        detail.push_str(&format!("; first failures: {:?}", report.notes));
    }
    announce(name, ok, detail);
}

#[test]
fn variational_duality() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        seed: SEED,
        count: 1000,
        size: 10,
    };
    let report = suite_duality(&cfg);
    announce_suite(
        "variational duality (exact LP, 1000 instances)",
        &report,
        Some((start.elapsed().as_secs_f64(), 60.0)),
    );
}

#[test]
fn pointwise_minorant_formula() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        seed: SEED,
        count: 1000,
        size: 10,
    };
    let report = suite_pointwise(&cfg);
    announce_suite(
        "pointwise minorant vs grid enumeration (1000 instances)",
        &report,
        Some((start.elapsed().as_secs_f64(), 60.0)),
    );
}

#[test]
fn transfer_map_identities() {
    let cfg = SuiteConfig {
        seed: SEED,
        count: 1000,
        size: 10,
    };
    let report = suite_transition(&cfg);
    announce_suite("transfer-map identities (1000 instances)", &report, None);
}

// thin wrapper so the identity suite keeps its packaged name
fn suite_transition(cfg: &SuiteConfig) -> SuiteReport {
    hardy_core::check::suite_transition(cfg)
}

#[test]
fn equimeasurability() {
    let cfg = SuiteConfig {
        seed: SEED,
        count: 1000,
        size: 10,
    };
    let report = suite_equimeasurable(&cfg);
    announce_suite("equimeasurability of the transferred operator (1000 instances)", &report, None);
}

#[test]
fn transport_witness() {
    let cfg = SuiteConfig {
        seed: SEED,
        count: 1000,
        size: 10,
    };
    let report = suite_witness(&cfg);
    announce_suite("mass-transport witness attains the infimum (1000 instances)", &report, None);
}

#[test]
fn dual_supremum_q_ge_1() {
    let cfg = SuiteConfig {
        seed: SEED,
        count: 1000,
        size: 10,
    };
    let report = suite_best_constant_exact(&cfg);
    announce_suite(
        "dual supremum = point-mass norm (q in {1, 3/2, 2, 3}) + minorant invariance",
        &report,
        None,
    );
}

#[test]
fn q_below_one_reduction_identity() {
    let cfg = SuiteConfig {
        seed: SEED,
        count: 1000,
        size: 10,
    };
    let report = suite_reduction_identity(&cfg);
    announce_suite(
        "double sum = half-line criterion after reduction (q in {1/4, 1/2, 3/4})",
        &report,
        None,
    );
}

#[test]
fn q_below_one_scaling_laws() {
    let cfg = SuiteConfig {
        seed: SEED,
        count: 1000,
        size: 10,
    };
    let report = suite_scaling(&cfg);
    announce_suite("scaling laws t^(1/q) and 1/t to 1e-12", &report, None);
}

#[test]
fn q_below_one_sandwich() {
    let cfg = SuiteConfig {
        seed: SEED,
        count: 500,
        size: 10,
    };
    let sandwich = suite_sandwich(&cfg, 32.0);
    for note in &sandwich.report.notes {
        println!("[acceptance]   sandwich {note}");
    }
    announce_suite(
        "empirical sandwich below 32 (500 instances, q in {1/4, 1/2, 3/4})",
        &sandwich.report,
        None,
    );
}

/// Uniform grid on (0,1] with `ω(x) = x^{-2}`, `v = 1`, `p = q = 2`.
fn classical_grid(n: usize) -> (MeasureSpace, OrderedCore, Vec<Rat>, Exponents) {
    let mu = vec![rat(1, n as i64); n];
    let labels = (0..n).map(|i| format!("x{}", i + 1)).collect();
    let space = MeasureSpace::new(labels, mu).unwrap();
    let core = OrderedCore::prefixes(n);
    let omega: Vec<Rat> = (1..=n)
        .map(|i| rat(n as i64, i as i64) * rat(n as i64, i as i64))
        .collect();
    let exps = Exponents::new(rint(2), rint(2)).unwrap();
    (space, core, omega, exps)
}

fn classical_grid_problem(n: usize) -> HardyProblem {
    let (space, core, omega, exps) = classical_grid(n);
    // tau = omega dmu, eta = v dmu with v = 1
    let tau: Vec<Rat> = omega
        .iter()
        .zip(space.mu_values())
        .map(|(w, m)| w * m)
        .collect();
    let item_labels = (0..n).map(|i| format!("y{}", i + 1)).collect();
    let refs = (0..n).map(Some).collect();
    let cm = CoreMap::from_chain_refs(item_labels, tau, &core, refs).unwrap();
    let eta = ScalarField::from_rats(space.mu_values().to_vec());
    HardyProblem::new(space, eta, cm, exps).unwrap()
}

/// Independent check for the grid fixture: the quotient is the norm of
/// a lower-triangular matrix at `p = q = 2`, so plain power iteration on
/// the normal operator computes the true maximum without any of the
/// search machinery.
fn classical_grid_power_iteration(n: usize, iterations: usize) -> f64 {
    let nf = n as f64;
    let mu = 1.0 / nf;
    // A f = sqrt(omega * mu) .* cumsum(f * mu), in g = sqrt(eta) f coords
    let w: Vec<f64> = (1..=n)
        .map(|i| ((nf / i as f64) * (nf / i as f64) * mu).sqrt())
        .collect();
    let sqrt_eta = mu.sqrt();
    let mut g = vec![1.0f64; n];
    let mut sigma2 = 0.0;
    for _ in 0..iterations {
        // f = g / sqrt(eta); h = A f; back = A^T h / sqrt(eta)
        let mut acc = 0.0;
        let mut h = vec![0.0f64; n];
        for i in 0..n {
            acc += g[i] / sqrt_eta * mu;
            h[i] = w[i] * acc;
        }
        let mut back = vec![0.0f64; n];
        let mut tail = 0.0;
        for i in (0..n).rev() {
            tail += w[i] * h[i];
            back[i] = tail * mu / sqrt_eta;
        }
        let norm = back.iter().map(|x| x * x).sum::<f64>().sqrt();
        sigma2 = norm;
        for i in 0..n {
            g[i] = back[i] / norm;
        }
    }
    sigma2.sqrt()
}

#[test]
fn classical_grid_condition() {
    let start = Instant::now();
    let (space, core, omega, exps) = classical_grid(1000);
    let condition = condition_p_le_q(
        &space,
        &core,
        &ScalarField::from_rats(omega),
        &ScalarField::from_rats(vec![rint(1); 1000]),
        &exps,
    )
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    announce(
        "classical grid fixture: tail-ball condition (n = 1000, p = q = 2)",
        (0.97..=1.00).contains(&condition.value) && elapsed < 120.0,
        format!(
            "condition {:.6} in [0.97, 1.00], {elapsed:.1}s of 120s",
            condition.value
        ),
    );
}

#[test]
fn classical_grid_searched_lower_bound() {
    let start = Instant::now();
    let problem = classical_grid_problem(1000);
    let report = maximize_ratio(&problem, 1, 120_000, SEED);
    let elapsed = start.elapsed().as_secs_f64();

    // Independent truth: the fixture is a plain singular-value problem.
    let sigma = classical_grid_power_iteration(1000, 4000);
    println!(
        "[acceptance]   independent power iteration gives {sigma:.9}; the search found {:.9}",
        report.lower_bound
    );
    assert!(
        (report.lower_bound - sigma).abs() <= 1e-4 * sigma,
        "the search fell short of the true operator norm {sigma}"
    );

    // The stated range assumes the continuum constant 2 survives the
    // n = 1000 uniform discretization. It does not: the discretized
    // operator's true norm is 1.7481 (deficit decays like 1/log n), as
    // the power iteration above confirms, so this assertion is
    // expected to stay red on this fixture.
    announce(
        "classical grid fixture: searched lower bound (n = 1000, p = q = 2)",
        (1.90..=2.00).contains(&report.lower_bound) && elapsed < 120.0,
        format!(
            "searched lower bound {:.6} in [1.90, 2.00], true discrete norm {sigma:.6}, {elapsed:.1}s of 120s",
            report.lower_bound
        ),
    );
}

#[test]
fn singular_weight_detection() {
    let cfg = SuiteConfig {
        seed: SEED,
        count: 100,
        size: 10,
    };
    let report = suite_singularity(&cfg);
    announce_suite(
        "singular weights force an infinite constant (100 constructed cases)",
        &report,
        None,
    );
}
