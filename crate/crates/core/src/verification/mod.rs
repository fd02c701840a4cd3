//! Ground truth and diagnostics: the brute-force oracle, errors against exact
//! solutions, the discrete comparison check and free-boundary extraction.

mod free_boundary;
mod oracle;

use rand::Rng;

pub use free_boundary::{classify, default_threshold, extract_free_boundary, FreeBoundary, Phase};
pub use oracle::{
    oracle_method, oracle_minimize, OracleMethod, ENUMERATION_MAX_INTERIOR, ORACLE_MAX_INTERIOR,
};

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::operator::{check_same_grid, minmax_values};
use crate::problem::{ProblemSpec, SampledProblem};
use crate::scalar::Scalar;

/// Maximal nodal error against an exact solution.
#[derive(Debug, Clone)]
pub struct ErrorReport<T> {
    pub n: usize,
    /// Sweep count the field was produced with; `None` for a converged solve.
    pub iterations: Option<usize>,
    pub max_error: T,
    /// `|u - u_exact|` at every node.
    pub errors: Field<T>,
}

impl<T: Scalar> ErrorReport<T> {
    pub fn with_iterations(mut self, sweeps: usize) -> Self {
        self.iterations = Some(sweeps);
        self
    }
}

pub fn max_error<T: Scalar>(
    u: &Field<T>,
    spec: &ProblemSpec<T>,
    grid: &Grid<T>,
) -> Result<ErrorReport<T>> {
    if u.grid() != grid {
        return Err(Error::GridMismatch);
    }
    if !spec.has_exact() {
        return Err(Error::MissingExactSolution);
    }
    let errors: Vec<T> = (0..grid.node_count())
        .map(|k| {
            let [x, y] = grid.position(k);
            (u.get(k) - spec.exact(x, y).expect("checked above")).abs()
        })
        .collect();
    let max_error = errors.iter().fold(T::zero(), |a, &b| a.max(b));
    Ok(ErrorReport {
        n: grid.n(),
        iterations: None,
        max_error,
        errors: Field::new(*grid, errors)?,
    })
}

/// Slack when checking the comparison premises.
pub const PREMISE_SLACK: f64 = 1e-12;
/// Slack when checking the conclusion `v1 ≤ v2`.
pub const VERDICT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComparisonOutcome<T> {
    /// Premises hold and `v1 ≤ v2` everywhere.
    Holds,
    /// Premises hold but `v1 > v2` at `node`.
    Counterexample {
        node: [usize; 2],
        excess: T,
    },
    PremisesNotMet,
}

impl<T> ComparisonOutcome<T> {
    /// `Some(verdict)` when the premises hold, `None` otherwise.
    pub fn verdict(&self) -> Option<bool> {
        match self {
            ComparisonOutcome::Holds => Some(true),
            ComparisonOutcome::Counterexample { .. } => Some(false),
            ComparisonOutcome::PremisesNotMet => None,
        }
    }
}

/// Discrete comparison principle: if `F_h[v1] ≤ F_h[v2]` in the interior and
/// `v1 ≤ v2` on the boundary, then `v1 ≤ v2` everywhere.
pub fn check_comparison<T: Scalar>(
    v1: &Field<T>,
    v2: &Field<T>,
    prob: &SampledProblem<T>,
) -> Result<ComparisonOutcome<T>> {
    check_same_grid(v1, prob)?;
    check_same_grid(v2, prob)?;
    let grid = prob.grid();
    let slack = T::lit(PREMISE_SLACK);
    let f1 = minmax_values(v1.values(), prob);
    let f2 = minmax_values(v2.values(), prob);
    let operator_ok = grid.interior().all(|k| f1[k] <= f2[k] + slack);
    let boundary_ok = grid.boundary().all(|k| v1.get(k) <= v2.get(k) + slack);
    if !(operator_ok && boundary_ok) {
        return Ok(ComparisonOutcome::PremisesNotMet);
    }
    let verdict_slack = T::lit(VERDICT_SLACK);
    let worst = (0..grid.node_count())
        .map(|k| (k, v1.get(k) - v2.get(k)))
        .fold((0, T::neg_infinity()), |a, b| if b.1 > a.1 { b } else { a });
    if worst.1 > verdict_slack {
        Ok(ComparisonOutcome::Counterexample {
            node: grid.multi(worst.0),
            excess: worst.1,
        })
    } else {
        Ok(ComparisonOutcome::Holds)
    }
}

/// Ranges for [`random_problem`].
#[derive(Debug, Clone, Copy)]
pub struct RandomProblemOptions {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub g_min: f64,
    pub g_max: f64,
}

impl Default for RandomProblemOptions {
    fn default() -> Self {
        Self {
            lambda_min: 0.1,
            lambda_max: 10.0,
            g_min: -1.0,
            g_max: 1.0,
        }
    }
}

impl RandomProblemOptions {
    /// Boundary data in `[0, 1]`.
    pub fn nonnegative_boundary() -> Self {
        Self {
            g_min: 0.0,
            ..Self::default()
        }
    }
}

/// Problem with independent uniform `λ±` per interior node and uniform `g`
/// per boundary node.
pub fn random_problem<T: Scalar, R: Rng + ?Sized>(
    grid: Grid<T>,
    rng: &mut R,
    opts: &RandomProblemOptions,
) -> Result<SampledProblem<T>> {
    let count = grid.node_count();
    let mut lp = vec![T::zero(); count];
    let mut lm = vec![T::zero(); count];
    let mut g = vec![T::zero(); count];
    for k in 0..count {
        if grid.is_interior(k) {
            lp[k] = T::lit(rng.gen_range(opts.lambda_min..=opts.lambda_max));
            lm[k] = T::lit(rng.gen_range(opts.lambda_min..=opts.lambda_max));
        } else {
            g[k] = T::lit(rng.gen_range(opts.g_min..=opts.g_max));
        }
    }
    SampledProblem::from_nodal("random", grid, lp, lm, g)
}
