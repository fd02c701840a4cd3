//! Brute-force minimiser of `J_h` for desk-scale grids.
//!
//! Every assignment of interior nodes to the phases `{+, -, 0}` fixes a
//! linear system (`L_h u = λ⁺` on `+`, `L_h u = -λ⁻` on `-`, `u = 0` on `0`).
//! Solving each one and keeping the sign-consistent candidate of least energy
//! yields the minimiser without ever running a projected iteration.

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::operator::energy_unchecked;
use crate::problem::SampledProblem;
use crate::scalar::Scalar;

/// Interior node cap for the oracle.
pub const ORACLE_MAX_INTERIOR: usize = 64;
/// Largest interior count handled by full enumeration (`3^12` patterns).
pub const ENUMERATION_MAX_INTERIOR: usize = 12;

const DESCENT_MAX_SWEEPS: usize = 1_000_000;
const DESCENT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Enumeration,
    CoordinateDescent,
}

pub fn oracle_method(interior: usize) -> Result<OracleMethod> {
    if interior > ORACLE_MAX_INTERIOR {
        Err(Error::OracleTooLarge {
            interior,
            cap: ORACLE_MAX_INTERIOR,
        })
    } else if interior <= ENUMERATION_MAX_INTERIOR {
        Ok(OracleMethod::Enumeration)
    } else {
        Ok(OracleMethod::CoordinateDescent)
    }
}

/// Minimiser of `J_h` over zero-boundary fields, returned as `u = ũ + g`.
pub fn oracle_minimize<T: Scalar>(prob: &SampledProblem<T>) -> Result<Field<T>> {
    let grid = prob.grid();
    let tilde = match oracle_method(grid.interior_count())? {
        OracleMethod::Enumeration => enumerate(prob).unwrap_or_else(|| coordinate_descent(prob)),
        OracleMethod::CoordinateDescent => coordinate_descent(prob),
    };
    Ok(prob.lift(&tilde))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Zero,
    Plus,
    Minus,
}

fn enumerate<T: Scalar>(prob: &SampledProblem<T>) -> Option<Vec<T>> {
    let grid = prob.grid();
    let interior: Vec<usize> = grid.interior().collect();
    let m = interior.len();
    let mut slot = vec![usize::MAX; grid.node_count()];
    for (a, &k) in interior.iter().enumerate() {
        slot[k] = a;
    }
    let inv_h2 = T::one() / grid.h2();
    let diag = -T::count(grid.dim().stencil_weight()) * inv_h2;
    let ltp = prob.lambda_tilde_plus();
    let ltm = prob.lambda_tilde_minus();
    let value_tol = T::lit(1e-12);

    let mut phases = vec![Phase::Zero; m];
    let mut active: Vec<usize> = Vec::with_capacity(m);
    let mut pos = vec![usize::MAX; m];
    let mut mat = Vec::with_capacity(m * m);
    let mut rhs = Vec::with_capacity(m);
    let mut candidate = vec![T::zero(); grid.node_count()];
    let mut best: Option<(T, Vec<T>)> = None;

    loop {
        active.clear();
        for (a, p) in phases.iter().enumerate() {
            if *p != Phase::Zero {
                pos[a] = active.len();
                active.push(a);
            }
        }
        let na = active.len();
        mat.clear();
        mat.resize(na * na, T::zero());
        rhs.clear();
        for (r, &a) in active.iter().enumerate() {
            let k = interior[a];
            mat[r * na + r] = diag;
            for &nb in grid.neighbors(k).as_slice() {
                let b = slot[nb];
                if b != usize::MAX && phases[b] != Phase::Zero {
                    mat[r * na + pos[b]] = inv_h2;
                }
            }
            rhs.push(match phases[a] {
                Phase::Plus => ltp[k],
                _ => -ltm[k],
            });
        }

        let consistent = solve_dense(&mut mat, &mut rhs, na) && {
            candidate.iter_mut().for_each(|v| *v = T::zero());
            for (r, &a) in active.iter().enumerate() {
                candidate[interior[a]] = rhs[r];
            }
            phases.iter().enumerate().all(|(a, p)| {
                let k = interior[a];
                match p {
                    Phase::Plus => candidate[k] >= -value_tol,
                    Phase::Minus => candidate[k] <= value_tol,
                    Phase::Zero => {
                        let lap = grid.laplacian_at(&candidate, k);
                        let band_tol = T::lit(1e-9) * (T::one() + ltp[k].abs().max(ltm[k].abs()));
                        lap <= ltp[k] + band_tol && lap >= -ltm[k] - band_tol
                    }
                }
            })
        };
        if consistent {
            let j = energy_unchecked(&candidate, prob);
            if best.as_ref().is_none_or(|(bj, _)| j < *bj) {
                best = Some((j, candidate.clone()));
            }
        }

        // next pattern in base 3; stop after wrapping around
        let mut wrapped = true;
        for p in phases.iter_mut() {
            match *p {
                Phase::Zero => *p = Phase::Plus,
                Phase::Plus => *p = Phase::Minus,
                Phase::Minus => {
                    *p = Phase::Zero;
                    continue;
                }
            }
            wrapped = false;
            break;
        }
        if wrapped {
            break;
        }
    }
    best.map(|(_, v)| v)
}

/// Gaussian elimination with partial pivoting; the solution overwrites `b`.
/// Returns false for a numerically singular matrix.
fn solve_dense<T: Scalar>(a: &mut [T], b: &mut [T], n: usize) -> bool {
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .abs()
                    .partial_cmp(&a[s * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        if a[pivot * n + col].abs() <= T::min_positive_value() {
            return false;
        }
        if pivot != col {
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
            }
            b.swap(pivot, col);
        }
        let p = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f == T::zero() {
                continue;
            }
            for c in col..n {
                let v = a[col * n + c];
                a[r * n + c] = a[r * n + c] - f * v;
            }
            b[r] = b[r] - f * b[col];
        }
    }
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s = s - a[r * n + c] * b[c];
        }
        b[r] = s / a[r * n + r];
    }
    b.iter().all(|v| v.is_finite())
}

/// Cyclic coordinate descent with the exact per-coordinate minimiser, found
/// by comparing the objective at the three stationary candidates.
fn coordinate_descent<T: Scalar>(prob: &SampledProblem<T>) -> Vec<T> {
    let grid = prob.grid();
    let interior: Vec<usize> = grid.interior().collect();
    let two = T::lit(2.0);
    // J along coordinate k: a t² - b t + λ⁺ t⁺ - λ⁻ t⁻
    let a = T::count(grid.dim().stencil_weight()) / (two * grid.h2());
    let tol = T::lit(DESCENT_TOL);
    let mut v = vec![T::zero(); grid.node_count()];
    for _ in 0..DESCENT_MAX_SWEEPS {
        let mut max_step = T::zero();
        for &k in &interior {
            let (lp, lm) = (prob.lambda_plus()[k], prob.lambda_minus()[k]);
            let b = grid.neighbor_sum(&v, k) / grid.h2() + prob.lap_g()[k];
            let q = |t: T| a * t * t - b * t + lp * t.max(T::zero()) - lm * t.min(T::zero());
            let mut best = T::zero();
            let mut best_q = q(best);
            for t in [(b - lp) / (two * a), (b + lm) / (two * a)] {
                let qt = q(t);
                if qt < best_q {
                    best = t;
                    best_q = qt;
                }
            }
            max_step = max_step.max((best - v[k]).abs());
            v[k] = best;
        }
        if max_step < tol {
            break;
        }
    }
    v
}
