//! Smoothed companion problem `L_h u = λ⁺ β_ε(u) - λ⁻ β_ε(-u)`, `u = g` on
//! the boundary, solved by nonlinear Gauss-Seidel with bracketed bisection
//! per node.
//!
//! Its solution stays within `ε` of the two-phase solution and its min-max
//! residual is bounded by `ε`, which makes it an independent check on PGS.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::operator::residual_norm;
use crate::pgs::{SolveReport, SweepTrace, Termination};
use crate::problem::SampledProblem;
use crate::scalar::Scalar;

/// Absolute width at which the per-node bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-14;
const MAX_HALVINGS: usize = 80;

#[derive(Debug, Clone, Copy)]
pub struct RegularizationConfig<T> {
    pub epsilon: T,
    pub max_sweeps: usize,
    /// Max-update tolerance for the outer sweeps.
    pub tolerance: T,
}

impl<T: Scalar> RegularizationConfig<T> {
    pub fn new(epsilon: T) -> Self {
        Self {
            epsilon,
            max_sweeps: 2_000_000,
            tolerance: T::lit(1e-13),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon <= T::zero() {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= T::zero() {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Allowed `max |u - u^ε|` against the two-phase solution: `ε` plus ten
/// times the sweep tolerance.
pub fn difference_bound<T: Scalar>(cfg: &RegularizationConfig<T>) -> T {
    cfg.epsilon + T::lit(10.0) * cfg.tolerance
}

/// Allowed `max |F_h[u^ε]|`.
pub fn residual_bound<T: Scalar>(eps: T) -> T {
    eps + T::lit(1e-8)
}

/// Non-decreasing ramp: 0 for `z ≤ -1`, 1 for `z ≥ 1`, cubic smoothstep
/// `3t² - 2t³` with `t = (z + 1) / 2` in between.
pub fn beta<T: Scalar>(z: T) -> T {
    if z <= -T::one() {
        T::zero()
    } else if z >= T::one() {
        T::one()
    } else {
        let t = (z + T::one()) / T::lit(2.0);
        t * t * (T::lit(3.0) - T::lit(2.0) * t)
    }
}

#[inline]
pub fn beta_eps<T: Scalar>(x: T, eps: T) -> T {
    beta(x / eps)
}

/// Root in `t` of `(s - d t)/h² - λ⁺ β_ε(t) + λ⁻ β_ε(-t)`, where `s` is the
/// neighbour sum of the full field `u`. The map is strictly decreasing and
/// changes sign on `[z¹, z²]`, the PGS candidates.
fn node_root<T: Scalar>(s: T, d: T, h2: T, lp: T, lm: T, eps: T) -> T {
    let z1 = (s - h2 * lp) / d;
    let z2 = (s + h2 * lm) / d;
    // saturated phases: the root is a PGS candidate exactly
    if z1 >= eps {
        return z1;
    }
    if z2 <= -eps {
        return z2;
    }
    let phi = |t: T| (s - d * t) / h2 - lp * beta_eps(t, eps) + lm * beta_eps(-t, eps);
    let mut lo = z1.max(-eps);
    let mut hi = z2.min(eps);
    let width = T::lit(BISECTION_WIDTH);
    for _ in 0..MAX_HALVINGS {
        if hi - lo <= width {
            break;
        }
        let mid = lo + (hi - lo) / T::lit(2.0);
        let f = phi(mid);
        if f > T::zero() {
            lo = mid;
        } else if f < T::zero() {
            hi = mid;
        } else {
            return mid;
        }
    }
    lo + (hi - lo) / T::lit(2.0)
}

/// Max-norm of `L_h u - λ⁺ β_ε(u) + λ⁻ β_ε(-u)` over interior nodes.
pub fn semilinear_residual<T: Scalar>(u: &[T], prob: &SampledProblem<T>, eps: T) -> T {
    let grid = prob.grid();
    grid.interior().fold(T::zero(), |acc, k| {
        let r = grid.laplacian_at(u, k) - prob.lambda_plus()[k] * beta_eps(u[k], eps)
            + prob.lambda_minus()[k] * beta_eps(-u[k], eps);
        acc.max(r.abs())
    })
}

/// Solves the regularized problem from a zero interior guess. The residual
/// trace records the semilinear residual; the energy trace stays empty.
pub fn solve_regularized<T: Scalar>(
    prob: &SampledProblem<T>,
    cfg: &RegularizationConfig<T>,
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    let start = Instant::now();
    let grid = *prob.grid();
    let d = T::count(grid.dim().stencil_weight());
    let h2 = grid.h2();
    let eps = cfg.epsilon;
    let interior: Vec<usize> = grid.interior().collect();
    let mut u = prob.g().to_vec();
    let mut trace = SweepTrace::default();
    let mut termination = Termination::SweepLimit;
    let mut sweeps = 0;

    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        let mut max_update = T::zero();
        for &k in &interior {
            let s = grid.neighbor_sum(&u, k);
            let new = node_root(s, d, h2, prob.lambda_plus()[k], prob.lambda_minus()[k], eps);
            max_update = max_update.max((new - u[k]).abs());
            u[k] = new;
        }
        trace.max_update.push(max_update);
        trace.residual.push(semilinear_residual(&u, prob, eps));
        if max_update < cfg.tolerance {
            termination = Termination::ConvergedByUpdate;
            break;
        }
    }

    Ok(SolveReport {
        u: Field::from_raw(grid, u),
        sweeps,
        termination,
        trace,
        energy_audit: None,
        wall_time: start.elapsed(),
    })
}

/// Max-norm of the min-max residual of a regularized solution.
pub fn minmax_residual_norm<T: Scalar>(u: &Field<T>, prob: &SampledProblem<T>) -> T {
    residual_norm(u.values(), prob)
}
