//! Finite-difference solver for the two-phase membrane (obstacle) problem
//!
//! ```text
//! Δu = λ⁺ χ{u>0} - λ⁻ χ{u<0}  in Ω,   u = g  on ∂Ω
//! ```
//!
//! on `(-1, 1)` or `(-1, 1)^2`, written pointwise as
//! `min(-Δu + λ⁺, max(-Δu - λ⁻, u)) = 0` and discretized with the 3-point /
//! 5-point Laplacian.
//!
//! - [`grid`]: uniform lattice, fields and `L_h`.
//! - [`problem`]: problem definitions, the two built-in examples, sampling and
//!   the config file format.
//! - [`operator`]: the min-max residual `F_h`, the energy `J_h` and its
//!   single-node increment.
//! - [`pgs`]: projected Gauss-Seidel.
//! - [`regularized`]: smoothed companion problem used as a cross-check.
//! - [`verification`]: brute-force oracle, error metrics, comparison check and
//!   free-boundary extraction.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! below fix the common double-precision case.
//!
//! ```
//! use biphase::{example1, pgs, Dim, Grid64, SolverConfig};
//!
//! let grid = Grid64::new(Dim::One, 20).unwrap();
//! let prob = example1().sample(&grid).unwrap();
//! let report = pgs::solve(&prob, &SolverConfig::default()).unwrap();
//! assert!(report.converged());
//! ```

pub mod error;
pub mod grid;
pub mod operator;
pub mod pgs;
pub mod problem;
pub mod regularized;
pub mod scalar;
pub mod verification;

pub use error::{Error, Result};
pub use grid::{laplacian, Dim, Field, Grid};
pub use operator::{energy, energy_delta_single, minmax_residual, Residual};
pub use pgs::{pgs_update, InitialGuess, SolveReport, SolverConfig, Termination};
pub use problem::{example1, example2, sample, ProblemConfig, ProblemSpec, SampledProblem};
pub use regularized::{
    beta, difference_bound, residual_bound, solve_regularized, RegularizationConfig,
};
pub use scalar::Scalar;
pub use verification::{
    check_comparison, extract_free_boundary, max_error, oracle_minimize, ComparisonOutcome,
    ErrorReport, FreeBoundary, Phase,
};

pub type Grid64 = Grid<f64>;
pub type Field64 = Field<f64>;
pub type ProblemSpec64 = ProblemSpec<f64>;
pub type SampledProblem64 = SampledProblem<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type SolveReport64 = SolveReport<f64>;

pub type Grid32 = Grid<f32>;
pub type Field32 = Field<f32>;
pub type SampledProblem32 = SampledProblem<f32>;
pub type SolverConfig32 = SolverConfig<f32>;
