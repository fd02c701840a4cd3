//! Projected Gauss-Seidel for the discrete min-max system.
//!
//! The iteration works on `ũ = u - g` (zero on the boundary) with the
//! modified coefficients `λ̃±`. At interior node `k`, with `S` the current sum
//! of its stencil neighbours and `d` the stencil weight (2 in 1D, 4 in 2D):
//!
//! ```text
//! z¹ = (S - h² λ̃⁺) / d      z² = (S + h² λ̃⁻) / d
//! ũ_k = z¹ if z¹ ≥ 0,  z² if z² ≤ 0,  0 otherwise
//! ```
//!
//! Each update is the exact minimiser of `J_h` along coordinate `k`, so the
//! energy decreases by at least `(d / 2h²)·(change)²` per update.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::grid::{Dim, Field};
use crate::operator::{energy_delta_single, energy_unchecked, residual_norm};
use crate::problem::SampledProblem;
use crate::scalar::Scalar;

/// Starting iterate.
#[derive(Debug, Clone, Default)]
pub enum InitialGuess<T> {
    /// `ũ = 0` at interior nodes.
    #[default]
    ZeroInterior,
    /// Full field `u`; its boundary values are replaced by `g`.
    Custom(Field<T>),
}

#[derive(Debug, Clone)]
pub struct SolverConfig<T> {
    pub max_sweeps: usize,
    /// Stop once the largest update of a sweep is below this.
    pub update_tol: T,
    /// Stop once `max |F_h[u]|` is below this.
    pub residual_tol: T,
    /// Record `J_h(ũ)` after every sweep and audit every single-node update.
    pub record_energy: bool,
    pub initial_guess: InitialGuess<T>,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            max_sweeps: 1_000_000,
            update_tol: T::lit(1e-12),
            residual_tol: T::lit(1e-10),
            record_energy: false,
            initial_guess: InitialGuess::ZeroInterior,
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    /// Runs exactly `sweeps` sweeps: both tolerances are zero, which the
    /// strict `<` stopping tests can never satisfy.
    pub fn fixed_sweeps(sweeps: usize) -> Self {
        Self {
            max_sweeps: sweeps,
            update_tol: T::zero(),
            residual_tol: T::zero(),
            ..Self::default()
        }
    }

    pub fn with_record_energy(mut self, on: bool) -> Self {
        self.record_energy = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be at least 1".into()));
        }
        for (name, tol) in [
            ("update_tol", self.update_tol),
            ("residual_tol", self.residual_tol),
        ] {
            if !tol.is_finite() || tol < T::zero() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and nonnegative"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    ConvergedByUpdate,
    ConvergedByResidual,
    SweepLimit,
}

impl Termination {
    pub fn converged(self) -> bool {
        !matches!(self, Termination::SweepLimit)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Termination::ConvergedByUpdate => "converged-by-update",
            Termination::ConvergedByResidual => "converged-by-residual",
            Termination::SweepLimit => "sweep-limit",
        }
    }
}

/// Per-sweep telemetry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepTrace<T> {
    pub max_update: Vec<T>,
    /// Max-norm of the residual of the system being solved, after each sweep.
    pub residual: Vec<T>,
    /// `J_h(ũ)` after each sweep; empty unless energy recording is on.
    pub energy: Vec<T>,
}

/// Audit of every single-node update against the decrease inequality
/// `J_before - J_after ≥ (1/h²)·(change)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAudit<T> {
    pub updates: usize,
    /// Largest `J_after - J_before` over all updates (≤ 0 when monotone).
    pub max_increase: T,
    /// Smallest `(J_before - J_after) - (change)²/h²` over all updates.
    pub min_gap_slack: T,
}

impl<T: Scalar> EnergyAudit<T> {
    fn new() -> Self {
        Self {
            updates: 0,
            max_increase: T::neg_infinity(),
            min_gap_slack: T::infinity(),
        }
    }

    fn record(&mut self, delta: T, step: T, h2: T) {
        self.updates += 1;
        self.max_increase = self.max_increase.max(delta);
        self.min_gap_slack = self.min_gap_slack.min(-delta - step * step / h2);
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    /// Final iterate including boundary values.
    pub u: Field<T>,
    pub sweeps: usize,
    pub termination: Termination,
    pub trace: SweepTrace<T>,
    pub energy_audit: Option<EnergyAudit<T>>,
    pub wall_time: Duration,
}

impl<T: Scalar> SolveReport<T> {
    pub fn converged(&self) -> bool {
        self.termination.converged()
    }

    pub fn final_residual(&self) -> Option<T> {
        self.trace.residual.last().copied()
    }
}

/// One projected update. `neighbor_sum` is taken in the zero-boundary field
/// `ũ`; `lt_plus`/`lt_minus` are `λ̃±` at the node.
#[inline]
pub fn pgs_update<T: Scalar>(dim: Dim, h: T, neighbor_sum: T, lt_plus: T, lt_minus: T) -> T {
    let d = T::count(dim.stencil_weight());
    let h2 = h * h;
    let z1 = (neighbor_sum - h2 * lt_plus) / d;
    if z1 >= T::zero() {
        return z1;
    }
    let z2 = (neighbor_sum + h2 * lt_minus) / d;
    if z2 <= T::zero() {
        return z2;
    }
    T::zero()
}

pub fn solve<T: Scalar>(prob: &SampledProblem<T>, cfg: &SolverConfig<T>) -> Result<SolveReport<T>> {
    solve_with_observer(prob, cfg, |_, _| {})
}

/// Like [`solve`], calling `observer(sweep, ũ)` after every sweep with the
/// current zero-boundary iterate.
pub fn solve_with_observer<T: Scalar>(
    prob: &SampledProblem<T>,
    cfg: &SolverConfig<T>,
    mut observer: impl FnMut(usize, &[T]),
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    let start = Instant::now();
    let grid = *prob.grid();
    let (h, h2) = (grid.h(), grid.h2());
    let mut tilde = match &cfg.initial_guess {
        InitialGuess::ZeroInterior => vec![T::zero(); grid.node_count()],
        InitialGuess::Custom(u) => {
            if u.grid() != &grid {
                return Err(Error::GridMismatch);
            }
            prob.homogenize(u)
        }
    };
    let interior: Vec<usize> = grid.interior().collect();
    let ltp = prob.lambda_tilde_plus();
    let ltm = prob.lambda_tilde_minus();

    let mut trace = SweepTrace::default();
    let mut audit = cfg.record_energy.then(EnergyAudit::new);
    let mut u_buf = prob.lift(&tilde).into_values();
    let mut termination = Termination::SweepLimit;
    let mut sweeps = 0;

    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        let mut max_update = T::zero();
        for &k in &interior {
            let s = grid.neighbor_sum(&tilde, k);
            let old = tilde[k];
            let new = pgs_update(grid.dim(), h, s, ltp[k], ltm[k]);
            if let Some(a) = audit.as_mut() {
                a.record(energy_delta_single(prob, k, old, new, s), new - old, h2);
            }
            tilde[k] = new;
            max_update = max_update.max((new - old).abs());
        }
        for &k in &interior {
            u_buf[k] = tilde[k];
        }
        let residual = residual_norm(&u_buf, prob);
        trace.max_update.push(max_update);
        trace.residual.push(residual);
        if cfg.record_energy {
            trace.energy.push(energy_unchecked(&tilde, prob));
        }
        observer(sweeps, &tilde);

        if max_update < cfg.update_tol {
            termination = Termination::ConvergedByUpdate;
            break;
        }
        if residual < cfg.residual_tol {
            termination = Termination::ConvergedByResidual;
            break;
        }
    }

    Ok(SolveReport {
        u: Field::from_raw(grid, u_buf),
        sweeps,
        termination,
        trace,
        energy_audit: audit,
        wall_time: start.elapsed(),
    })
}
