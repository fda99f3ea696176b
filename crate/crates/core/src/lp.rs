//! Exact-rational two-phase simplex for small dense programs.
//!
//! Solves `min c·x` subject to `A x ≥ b`, `x ≥ 0` with arbitrary
//! precision rational pivoting and Bland's rule, so the optimum is exact
//! and the iteration cannot cycle. Sized for the handful of variables
//! the verification suites need, not for production-scale programs.

use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(Rat),
    Infeasible,
    Unbounded,
}

/// Minimize `c·x` over `A x ≥ b`, `x ≥ 0`.
pub fn solve_min(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Equality form: A x - s + z = b with surplus s and artificial z,
    // after normalizing each row to a non-negative right-hand side.
    // Columns: 0..n original, n..n+m surplus, n+m..n+2m artificial.
    let cols = n + 2 * m;
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let sign = if flip { -Rat::one() } else { Rat::one() };
        let mut row = vec![Rat::zero(); cols];
        for j in 0..n {
            row[j] = &a[i][j] * &sign;
        }
        row[n + i] = -&sign;
        row[n + m + i] = Rat::one();
        tab.push(row);
        rhs.push(&b[i] * &sign);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();

    // Phase 1: minimize the sum of artificials.
    let mut phase1 = vec![Rat::zero(); cols];
    for col in phase1.iter_mut().skip(n + m) {
        *col = Rat::one();
    }
    let feasible = run_simplex(&mut tab, &mut rhs, &mut basis, &phase1, Some(n + m));
    match feasible {
        SimplexEnd::Optimal(v) if v.is_zero() => {}
        SimplexEnd::Optimal(_) => return LpOutcome::Infeasible,
        SimplexEnd::Unbounded => unreachable!("phase-1 objective is bounded below by zero"),
    }
    // Pivot lingering artificials out of the basis where possible; rows
    // that cannot pivot are redundant and harmless with value zero.
    for i in 0..m {
        if basis[i] >= n + m {
            if let Some(j) = (0..n + m).find(|&j| !tab[i][j].is_zero()) {
                pivot(&mut tab, &mut rhs, &mut basis, i, j);
            }
        }
    }

    let mut phase2 = vec![Rat::zero(); cols];
    phase2[..n].clone_from_slice(c);
    match run_simplex(&mut tab, &mut rhs, &mut basis, &phase2, Some(n + m)) {
        SimplexEnd::Optimal(v) => LpOutcome::Optimal(v),
        SimplexEnd::Unbounded => LpOutcome::Unbounded,
    }
}

enum SimplexEnd {
    Optimal(Rat),
    Unbounded,
}

/// Bland-rule simplex on the current tableau; `col_limit` restricts the
/// columns eligible to enter (used to bar artificials in phase 2).
fn run_simplex(
    tab: &mut [Vec<Rat>],
    rhs: &mut [Rat],
    basis: &mut [usize],
    cost: &[Rat],
    col_limit: Option<usize>,
) -> SimplexEnd {
    let m = tab.len();
    let limit = col_limit.unwrap_or(cost.len());
    loop {
        // reduced costs: cost_j - cost_B · column_j
        let mut entering = None;
        for j in 0..limit {
            if basis.contains(&j) {
                continue;
            }
            let mut reduced = cost[j].clone();
            for i in 0..m {
                if !tab[i][j].is_zero() {
                    reduced -= &cost[basis[i]] * &tab[i][j];
                }
            }
            if reduced.is_negative() {
                entering = Some(j);
                break; // Bland: smallest index
            }
        }
        let Some(e) = entering else {
            let mut value = Rat::zero();
            for i in 0..m {
                value += &cost[basis[i]] * &rhs[i];
            }
            return SimplexEnd::Optimal(value);
        };
        // ratio test, ties to the smallest basis variable
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if tab[i][e].is_positive() {
                let ratio = &rhs[i] / &tab[i][e];
                let replace = match &leave {
                    None => true,
                    Some((cur, best)) => {
                        ratio < *best || (ratio == *best && basis[i] < basis[*cur])
                    }
                };
                if replace {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((l, _)) = leave else {
            return SimplexEnd::Unbounded;
        };
        pivot(tab, rhs, basis, l, e);
    }
}

fn pivot(tab: &mut [Vec<Rat>], rhs: &mut [Rat], basis: &mut [usize], row: usize, col: usize) {
    let m = tab.len();
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v /= &p;
    }
    rhs[row] /= &p;
    for i in 0..m {
        if i == row || tab[i][col].is_zero() {
            continue;
        }
        let factor = tab[i][col].clone();
        let pivot_row = tab[row].clone();
        for (v, pv) in tab[i].iter_mut().zip(&pivot_row) {
            *v -= &factor * pv;
        }
        let sub = &factor * &rhs[row];
        rhs[i] -= sub;
    }
    basis[row] = col;
}
