use crate::grid::{Dim, Field};
use crate::problem::SampledProblem;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Positive,
    Negative,
    Zero,
}

/// Thresholded phase map of a field and the interfaces between phases.
#[derive(Debug, Clone)]
pub struct FreeBoundary<T> {
    pub tau: T,
    /// Phase of every node (boundary nodes included).
    pub phases: Vec<Phase>,
    /// Midpoints of grid edges crossing `∂{u > τ}`; `y = 0` in 1D.
    pub positive_interface: Vec<[T; 2]>,
    /// Midpoints of grid edges crossing `∂{u < -τ}`.
    pub negative_interface: Vec<[T; 2]>,
}

impl<T> FreeBoundary<T> {
    pub fn count(&self, phase: Phase, interior: impl Iterator<Item = usize>) -> usize {
        interior.filter(|&k| self.phases[k] == phase).count()
    }
}

/// `h² max(λ⁺ + λ⁻) / 8`: the deflection scale of a single cell.
pub fn default_threshold<T: Scalar>(prob: &SampledProblem<T>) -> T {
    prob.grid().h2() * prob.max_lambda_sum() / T::lit(8.0)
}

pub fn classify<T: Scalar>(v: T, tau: T) -> Phase {
    if v > tau {
        Phase::Positive
    } else if v < -tau {
        Phase::Negative
    } else {
        Phase::Zero
    }
}

/// Classifies nodes with threshold `tau` and reports interface midpoints on
/// grid edges with at least one interior endpoint.
pub fn extract_free_boundary<T: Scalar>(u: &Field<T>, tau: T) -> FreeBoundary<T> {
    let grid = *u.grid();
    let phases: Vec<Phase> = u.values().iter().map(|&v| classify(v, tau)).collect();
    let mut positive_interface = Vec::new();
    let mut negative_interface = Vec::new();
    let half = T::lit(0.5);
    let side = grid.side();

    let mut visit = |a: usize, b: usize| {
        if !grid.is_interior(a) && !grid.is_interior(b) {
            return;
        }
        let (pa, pb) = (phases[a], phases[b]);
        let [xa, ya] = grid.position(a);
        let [xb, yb] = grid.position(b);
        let mid = [(xa + xb) * half, (ya + yb) * half];
        if (pa == Phase::Positive) != (pb == Phase::Positive) {
            positive_interface.push(mid);
        }
        if (pa == Phase::Negative) != (pb == Phase::Negative) {
            negative_interface.push(mid);
        }
    };

    for k in 0..grid.node_count() {
        let [i, j] = grid.multi(k);
        if i + 1 < side {
            visit(k, k + 1);
        }
        if grid.dim() == Dim::Two && j + 1 < side {
            visit(k, k + side);
        }
    }

    FreeBoundary {
        tau,
        phases,
        positive_interface,
        negative_interface,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn zero_field_single_phase() {
        let grid = Grid::<f64>::new(Dim::Two, 6).unwrap();
        let fb = extract_free_boundary(&Field::zeros(grid), 1e-3);
        assert!(fb.phases.iter().all(|&p| p == Phase::Zero));
        assert!(fb.positive_interface.is_empty() && fb.negative_interface.is_empty());
    }

    #[test]
    fn positive_field_has_no_interface() {
        let grid = Grid::<f64>::new(Dim::One, 10).unwrap();
        let u = Field::from_fn(grid, |x, _| 2.0 + x).unwrap();
        let fb = extract_free_boundary(&u, 0.01);
        assert!(fb.phases.iter().all(|&p| p == Phase::Positive));
        assert!(fb.positive_interface.is_empty());
    }

    #[test]
    fn sign_change_yields_midpoints() {
        let grid = Grid::<f64>::new(Dim::One, 4).unwrap();
        // nodes -1, -0.5, 0, 0.5, 1
        let u = Field::new(grid, vec![-1.0, -0.2, 0.0, 0.3, 1.0]).unwrap();
        let fb = extract_free_boundary(&u, 0.1);
        assert_eq!(fb.positive_interface, vec![[0.25, 0.0]]);
        assert_eq!(fb.negative_interface, vec![[-0.25, 0.0]]);
        assert_eq!(fb.count(Phase::Zero, grid.interior()), 1);
    }

    #[test]
    fn direct_sign_flip_reports_both_interfaces() {
        let grid = Grid::<f64>::new(Dim::One, 2).unwrap();
        let u = Field::new(grid, vec![-1.0, -1.0, 1.0]).unwrap();
        let fb = extract_free_boundary(&u, 0.1);
        assert_eq!(fb.positive_interface, vec![[0.5, 0.0]]);
        assert_eq!(fb.negative_interface, vec![[0.5, 0.0]]);
    }
}
