//! The pointwise min-max operator `F_h`, the discrete energy `J_h` and its
//! single-coordinate increment.

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::problem::SampledProblem;
use crate::scalar::{max_abs, pairwise_sum, Scalar};

/// Boundary agreement required by [`minmax_residual`].
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// `min(-lap + λ⁺, max(-lap - λ⁻, u))`.
#[inline]
pub fn minmax<T: Scalar>(lap: T, u: T, lambda_plus: T, lambda_minus: T) -> T {
    (-lap + lambda_plus).min((-lap - lambda_minus).max(u))
}

/// `F_h[u]` at every interior node.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual<T> {
    /// One entry per grid node; boundary entries are zero.
    values: Vec<T>,
    max_norm: T,
}

impl<T: Scalar> Residual<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn at(&self, k: usize) -> T {
        self.values[k]
    }

    pub fn max_norm(&self) -> T {
        self.max_norm
    }
}

/// `F_h` over a raw value slice without boundary checks.
pub(crate) fn minmax_values<T: Scalar>(values: &[T], prob: &SampledProblem<T>) -> Vec<T> {
    let grid = prob.grid();
    let mut out = vec![T::zero(); grid.node_count()];
    for k in grid.interior() {
        out[k] = minmax(
            grid.laplacian_at(values, k),
            values[k],
            prob.lambda_plus()[k],
            prob.lambda_minus()[k],
        );
    }
    out
}

/// Max-norm of `F_h[u]` without the boundary check; used for sweep traces.
pub(crate) fn residual_norm<T: Scalar>(values: &[T], prob: &SampledProblem<T>) -> T {
    let grid = prob.grid();
    grid.interior().fold(T::zero(), |acc, k| {
        let r = minmax(
            grid.laplacian_at(values, k),
            values[k],
            prob.lambda_plus()[k],
            prob.lambda_minus()[k],
        );
        acc.max(r.abs())
    })
}

pub(crate) fn check_same_grid<T: Scalar>(u: &Field<T>, prob: &SampledProblem<T>) -> Result<()> {
    if u.grid() != prob.grid() {
        Err(Error::GridMismatch)
    } else {
        Ok(())
    }
}

/// Evaluates `F_h[u]`. The field must carry the problem's boundary data.
pub fn minmax_residual<T: Scalar>(u: &Field<T>, prob: &SampledProblem<T>) -> Result<Residual<T>> {
    check_same_grid(u, prob)?;
    let grid = prob.grid();
    let tol = T::lit(BOUNDARY_TOLERANCE);
    for k in grid.boundary() {
        let (expected, found) = (prob.g()[k], u.get(k));
        if (expected - found).abs() > tol {
            return Err(Error::BoundaryViolation {
                node: grid.multi(k),
                expected: expected.to_f64_lossy(),
                found: found.to_f64_lossy(),
            });
        }
    }
    let values = minmax_values(u.values(), prob);
    let max_norm = max_abs(&values);
    Ok(Residual { values, max_norm })
}

/// `J_h(v) = -½(L_h v, v) + (λ⁺, v∨0) - (λ⁻, v∧0) - (L_h g, v)` for `v` with
/// zero boundary values.
pub fn energy<T: Scalar>(v: &Field<T>, prob: &SampledProblem<T>) -> Result<T> {
    check_same_grid(v, prob)?;
    let grid = prob.grid();
    if let Some(k) = grid.boundary().find(|&k| v.get(k) != T::zero()) {
        return Err(Error::NonZeroBoundary {
            node: grid.multi(k),
            value: v.get(k).to_f64_lossy(),
        });
    }
    Ok(energy_unchecked(v.values(), prob))
}

pub(crate) fn energy_unchecked<T: Scalar>(v: &[T], prob: &SampledProblem<T>) -> T {
    let grid = prob.grid();
    let half = T::lit(0.5);
    let terms: Vec<T> = grid
        .interior()
        .map(|k| {
            let x = v[k];
            let quad = -half * grid.laplacian_at(v, k) * x;
            quad + prob.lambda_plus()[k] * x.max(T::zero())
                - prob.lambda_minus()[k] * x.min(T::zero())
                - prob.lap_g()[k] * x
        })
        .collect();
    pairwise_sum(&terms)
}

/// Exact change `J_h(after) - J_h(before)` when only component `k` moves from
/// `old` to `new`. `neighbor_sum` is the sum of the stencil neighbours of `k`
/// in the zero-boundary field.
pub fn energy_delta_single<T: Scalar>(
    prob: &SampledProblem<T>,
    k: usize,
    old: T,
    new: T,
    neighbor_sum: T,
) -> T {
    let grid = prob.grid();
    let h2 = grid.h2();
    let half_weight = T::count(grid.dim().stencil_weight()) / T::lit(2.0);
    let zero = T::zero();
    let step = new - old;
    // -½(L_h v, v) restricted to v_k is (d/2) v_k²/h² - v_k S/h²
    let smooth = step * (half_weight * (new + old) - neighbor_sum) / h2 - prob.lap_g()[k] * step;
    let kink = prob.lambda_plus()[k] * (new.max(zero) - old.max(zero))
        - prob.lambda_minus()[k] * (new.min(zero) - old.min(zero));
    smooth + kink
}
