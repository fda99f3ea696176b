//! The four subcommands, shared by the binary and its tests.

use std::path::Path;

use sha2::{Digest, Sha256};

use hardy_core::check::{run_all, SuiteConfig};
use hardy_core::hardy::{l1_best_constant, prepare, reduce_to_halfline, OuterExponent};
use hardy_core::minorant::variational_value;
use hardy_core::oracle::{exact_norm_p1, lp_variational, maximize_ratio};
use hardy_core::problem::{BuiltProblem, ProblemFile};
use hardy_core::rational::{format_rat, rint, ExtRat};
use hardy_core::spaces::ScalarField;
use hardy_core::Error;

use crate::report::*;

pub struct CommandOutcome {
    pub report: String,
    /// False when a property check failed (exit code 2).
    pub checks_passed: bool,
}

type CmdResult = Result<CommandOutcome, Error>;

fn load(path: &Path) -> Result<(ProblemFile, InputEcho), Error> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| Error::Parse(format!("{} is not UTF-8: {e}", path.display())))?;
    let file = ProblemFile::from_toml_str(&text)?;
    let digest = Sha256::digest(&bytes);
    let echo = InputEcho {
        path: path.display().to_string(),
        sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
    };
    Ok((file, echo))
}

pub fn cmd_minorant(path: &Path, emit: Emit) -> CmdResult {
    let (file, echo) = load(path)?;
    let problem = file.build()?.to_hardy()?;
    let pre = prepare(&problem)?;

    let n = problem.space.len();
    let mut points = Vec::with_capacity(n);
    for s in 0..n {
        let minorant = pre.induced.point_map[s]
            .map(|new| fmt_ext(&pre.minor.minorant[new]));
        points.push(PointRow {
            label: problem.space.label(s).to_string(),
            mu: format_rat(problem.space.mu(s)),
            eta: fmt_ext(&problem.eta[s]),
            minorant,
        });
    }

    let ones = ScalarField::constant(pre.induced.space.len(), ExtRat::from_int(1));
    let direct = variational_value(&pre.induced.core, &pre.induced.space, &ones, &pre.u0)?;
    let lp = lp_variational(&pre.induced.core, &pre.induced.space, &ones, &pre.u0)?;
    let matches = direct == ExtRat::Finite(lp.clone());

    let report = MinorantReport {
        command: "minorant".into(),
        input: echo,
        points,
        per_layer: pre.minor.per_layer.iter().map(fmt_ext).collect(),
        variational: fmt_ext(&direct),
        lp: format_rat(&lp),
        formula_matches_lp: matches,
    };
    Ok(CommandOutcome {
        report: render(&report, emit),
        checks_passed: matches,
    })
}

pub struct ConstantOptions {
    pub outer: OuterExponent,
    pub seed: u64,
    pub restarts: usize,
    pub budget: usize,
}

pub fn cmd_constant(path: &Path, opts: &ConstantOptions, emit: Emit) -> CmdResult {
    let (file, echo) = load(path)?;
    let built = file.build()?;
    let exps = built.exponents().clone();
    let problem = built.to_hardy()?;

    let estimate = if exps.p_is_one() {
        let est = l1_best_constant(&problem, opts.outer)?;
        EstimateRow {
            name: "best_constant".into(),
            kind: est.kind.as_str().into(),
            value: fmt_f64(est.value),
            exact: est.exact.as_ref().map(fmt_ext),
            notes: est.notes,
        }
    } else {
        match &built {
            BuiltProblem::Metric(m) => {
                let est = m
                    .metric
                    .metric_condition(&m.omega, &m.v, exps.p().clone(), exps.q().clone())?;
                EstimateRow {
                    name: "condition".into(),
                    kind: est.kind.as_str().into(),
                    value: fmt_f64(est.value),
                    exact: None,
                    notes: est.notes,
                }
            }
            BuiltProblem::Hardy(_) => {
                return Err(Error::validation(
                    "exponents.p",
                    "the p > 1 conditions need the metric shape (omega and v weights)",
                ));
            }
        }
    };

    let point_mass_norm = if exps.p_is_one() && exps.q() >= &rint(1) {
        let norm = exact_norm_p1(&problem)?;
        Some(EstimateRow {
            name: "point_mass_norm".into(),
            kind: "oracle".into(),
            value: fmt_f64(norm.value),
            exact: norm.exact.as_ref().map(fmt_ext),
            notes: "maximum quotient over point masses".into(),
        })
    } else {
        None
    };

    let search = maximize_ratio(&problem, opts.restarts, opts.budget, opts.seed);
    let est_value: f64 = estimate.value.parse().unwrap_or(f64::INFINITY);
    let sandwich = if est_value.is_finite()
        && est_value > 0.0
        && search.lower_bound.is_finite()
        && search.lower_bound > 0.0
    {
        Some(SandwichBlock {
            estimate_over_lower: fmt_f64(est_value / search.lower_bound),
            lower_over_estimate: fmt_f64(search.lower_bound / est_value),
        })
    } else {
        None
    };

    let report = ConstantReport {
        command: "constant".into(),
        input: echo,
        p: format_rat(exps.p()),
        q: format_rat(exps.q()),
        outer_exponent: opts.outer.as_str().into(),
        estimates: vec![estimate],
        oracle: OracleBlock {
            point_mass_norm,
            search: SearchRow {
                lower_bound: fmt_f64(search.lower_bound),
                iterations: search.iterations,
                converged: search.converged,
                seed: search.seed,
            },
        },
        sandwich,
    };
    Ok(CommandOutcome {
        report: render(&report, emit),
        checks_passed: true,
    })
}

pub fn cmd_reduce(path: &Path, emit: Emit) -> CmdResult {
    let (file, echo) = load(path)?;
    let problem = file.build()?.to_hardy()?;
    let report = match reduce_to_halfline(&problem) {
        Ok(red) => ReduceReport {
            command: "reduce".into(),
            input: echo,
            infinite: false,
            lambda: red
                .lambda
                .atoms()
                .iter()
                .map(|(p, m)| AtomRow {
                    position: format_rat(p),
                    mass: format_rat(m),
                })
                .collect(),
            nu: red
                .nu
                .atoms()
                .iter()
                .map(|(p, m)| AtomRow {
                    position: format_rat(p),
                    mass: format_rat(m),
                })
                .collect(),
            w: red.w.values().iter().map(fmt_ext).collect(),
            note: None,
        },
        Err(Error::SingularEta) => ReduceReport {
            command: "reduce".into(),
            input: echo,
            infinite: true,
            lambda: Vec::new(),
            nu: Vec::new(),
            w: Vec::new(),
            note: Some(
                "eta vanishes on a tau-reachable positive-mass set; the best constant is infinite"
                    .into(),
            ),
        },
        Err(e) => return Err(e),
    };
    Ok(CommandOutcome {
        report: render(&report, emit),
        checks_passed: true,
    })
}

pub struct VerifyOptions {
    pub seed: u64,
    pub count: usize,
    pub size: usize,
    pub sandwich_bound: f64,
}

pub fn cmd_verify(opts: &VerifyOptions, emit: Emit) -> CmdResult {
    let cfg = SuiteConfig {
        seed: opts.seed,
        count: opts.count,
        size: opts.size,
    };
    let reports = run_all(&cfg, opts.sandwich_bound);
    let passed = reports.iter().all(|r| r.passed());
    let report = VerifyReport {
        command: "verify".into(),
        seed: opts.seed,
        count: opts.count,
        size: opts.size,
        sandwich_bound: fmt_f64(opts.sandwich_bound),
        suites: reports
            .into_iter()
            .map(|r| SuiteRow {
                name: r.name,
                checked: r.checked,
                failures: r.failures,
                notes: r.notes,
            })
            .collect(),
        passed,
    };
    Ok(CommandOutcome {
        report: render(&report, emit),
        checks_passed: passed,
    })
}
