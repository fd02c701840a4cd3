//! Uniform node lattice on `[-1, 1]` / `[-1, 1]^2` and the discrete Laplacian.
//!
//! Nodes are stored flat in row-major order: in 2D the flat index of node
//! `(i, j)` is `j * (n + 1) + i`, so `i` (the x index) varies fastest. All
//! index arithmetic lives here; the rest of the crate only deals in flat
//! indices.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            other => Err(Error::InvalidDimension(other)),
        }
    }

    pub fn as_usize(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }

    /// Diagonal weight of the Laplacian stencil (2 in 1D, 4 in 2D).
    pub fn stencil_weight(self) -> usize {
        2 * self.as_usize()
    }
}

/// Uniform lattice with `n` subdivisions per axis and spacing `h = 2 / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    dim: Dim,
    n: usize,
    h: T,
}

impl<T: Scalar> Grid<T> {
    pub fn new(dim: Dim, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid { n });
        }
        Ok(Self {
            dim,
            n,
            h: T::lit(2.0) / T::count(n),
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Subdivisions per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn h2(&self) -> T {
        self.h * self.h
    }

    /// Nodes per axis (`n + 1`).
    pub fn side(&self) -> usize {
        self.n + 1
    }

    pub fn node_count(&self) -> usize {
        match self.dim {
            Dim::One => self.side(),
            Dim::Two => self.side() * self.side(),
        }
    }

    pub fn interior_count(&self) -> usize {
        match self.dim {
            Dim::One => self.n - 1,
            Dim::Two => (self.n - 1) * (self.n - 1),
        }
    }

    /// Coordinate of lattice index `i` along one axis: `-1 + i h`.
    pub fn coord(&self, i: usize) -> T {
        -T::one() + T::count(i) * self.h
    }

    /// Flat index of `(i, j)`; `j` is ignored in 1D.
    #[inline]
    pub fn flat(&self, i: usize, j: usize) -> usize {
        match self.dim {
            Dim::One => i,
            Dim::Two => j * self.side() + i,
        }
    }

    /// Multi-index `[i, j]` of a flat index (`j = 0` in 1D).
    #[inline]
    pub fn multi(&self, k: usize) -> [usize; 2] {
        match self.dim {
            Dim::One => [k, 0],
            Dim::Two => [k % self.side(), k / self.side()],
        }
    }

    /// Physical position of a node; `y = 0` in 1D.
    pub fn position(&self, k: usize) -> [T; 2] {
        let [i, j] = self.multi(k);
        match self.dim {
            Dim::One => [self.coord(i), T::zero()],
            Dim::Two => [self.coord(i), self.coord(j)],
        }
    }

    pub fn is_interior(&self, k: usize) -> bool {
        let [i, j] = self.multi(k);
        let inner = |a: usize| a >= 1 && a < self.n;
        match self.dim {
            Dim::One => inner(i),
            Dim::Two => inner(i) && inner(j),
        }
    }

    /// Interior nodes in ascending flat (lexicographic) order.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        let (lo, hi) = (1, self.n);
        let side = self.side();
        let rows = match self.dim {
            Dim::One => 0..1,
            Dim::Two => lo..hi,
        };
        rows.flat_map(move |j| (lo..hi).map(move |i| j * side + i))
    }

    pub fn boundary(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(move |&k| !self.is_interior(k))
    }

    /// Stencil neighbours of a node. Only meaningful for interior nodes, which
    /// always have the full set of 2 (1D) or 4 (2D) neighbours.
    #[inline]
    pub fn neighbors(&self, k: usize) -> Neighbors {
        match self.dim {
            Dim::One => Neighbors {
                idx: [k - 1, k + 1, 0, 0],
                len: 2,
            },
            Dim::Two => {
                let s = self.side();
                Neighbors {
                    idx: [k - 1, k + 1, k - s, k + s],
                    len: 4,
                }
            }
        }
    }

    /// Sum of the stencil neighbours of interior node `k`.
    #[inline]
    pub fn neighbor_sum(&self, values: &[T], k: usize) -> T {
        match self.dim {
            Dim::One => values[k - 1] + values[k + 1],
            Dim::Two => {
                let s = self.side();
                values[k - 1] + values[k + 1] + values[k - s] + values[k + s]
            }
        }
    }

    /// Unchecked `L_h` at interior node `k` over a raw value slice.
    #[inline]
    pub(crate) fn laplacian_at(&self, values: &[T], k: usize) -> T {
        let d = T::count(self.dim.stencil_weight());
        (self.neighbor_sum(values, k) - d * values[k]) / self.h2()
    }

    pub(crate) fn check_interior(&self, k: usize) -> Result<()> {
        if k < self.node_count() && self.is_interior(k) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                node: self.multi(k),
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Neighbors {
    idx: [usize; 4],
    len: usize,
}

impl Neighbors {
    pub fn as_slice(&self) -> &[usize] {
        &self.idx[..self.len]
    }
}

/// Real values on every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: Grid<T>,
    values: Vec<T>,
}

impl<T: Scalar> Field<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::FieldLength {
                expected: grid.node_count(),
                found: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                node: grid.multi(k),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        Self {
            grid,
            values: vec![T::zero(); grid.node_count()],
        }
    }

    /// Samples `f(x, y)` at every node (`y = 0` in 1D).
    pub fn from_fn(grid: Grid<T>, f: impl Fn(T, T) -> T) -> Result<Self> {
        let values = (0..grid.node_count())
            .map(|k| {
                let [x, y] = grid.position(k);
                f(x, y)
            })
            .collect();
        Self::new(grid, values)
    }

    pub(crate) fn from_raw(grid: Grid<T>, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.node_count());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, k: usize) -> T {
        self.values[k]
    }

    pub fn set(&mut self, k: usize, v: T) -> Result<()> {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                node: self.grid.multi(k),
            });
        }
        self.values[k] = v;
        Ok(())
    }

    /// Applies `f` to every value, rejecting non-finite results.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Max-norm of the difference of two fields on the same grid.
    pub fn max_diff(&self, other: &Field<T>) -> Result<T> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs())))
    }

    pub fn laplacian(&self, k: usize) -> Result<T> {
        laplacian(self, k)
    }
}

/// Discrete Laplacian `L_h u` at an interior node (3-point in 1D, 5-point in 2D).
pub fn laplacian<T: Scalar>(field: &Field<T>, k: usize) -> Result<T> {
    field.grid.check_interior(k)?;
    Ok(field.grid.laplacian_at(&field.values, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_grid_spacing_and_nodes() {
        let g = Grid::<f64>::new(Dim::One, 20).unwrap();
        assert!((g.h() - 0.1).abs() < 1e-15);
        assert_eq!(g.node_count(), 21);
        assert!((g.coord(0) + 1.0).abs() < 1e-15);
        assert!((g.coord(1) + 0.9).abs() < 1e-15);
        assert!((g.coord(20) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn smallest_grid_has_single_interior_node_at_origin() {
        let g = Grid::<f64>::new(Dim::One, 2).unwrap();
        let interior: Vec<_> = g.interior().collect();
        assert_eq!(interior, vec![1]);
        assert_eq!(g.coord(1), 0.0);
    }

    #[test]
    fn two_dimensional_counts() {
        let g = Grid::<f64>::new(Dim::Two, 4).unwrap();
        assert_eq!(g.node_count(), 25);
        assert_eq!(g.interior().count(), 9);
        assert_eq!(g.interior_count(), 9);
        assert_eq!(g.boundary().count(), 16);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert_eq!(
            Grid::<f64>::new(Dim::One, 1).unwrap_err(),
            Error::InvalidGrid { n: 1 }
        );
        assert!(Grid::<f64>::new(Dim::Two, 0).is_err());
        assert!(Dim::from_usize(3).is_err());
    }

    #[test]
    fn h_times_n_is_two() {
        for n in 2..600 {
            let g = Grid::<f64>::new(Dim::One, n).unwrap();
            assert!((g.h() * n as f64 - 2.0).abs() <= f64::EPSILON * 2.0);
        }
    }

    #[test]
    fn interior_and_boundary_partition_nodes() {
        for dim in [Dim::One, Dim::Two] {
            for n in 2..9 {
                let g = Grid::<f64>::new(dim, n).unwrap();
                let mut seen = vec![0u8; g.node_count()];
                for k in g.interior().chain(g.boundary()) {
                    seen[k] += 1;
                }
                assert!(seen.iter().all(|&c| c == 1));
            }
        }
    }

    #[test]
    fn flat_and_multi_are_inverse() {
        let g = Grid::<f64>::new(Dim::Two, 5).unwrap();
        for k in 0..g.node_count() {
            let [i, j] = g.multi(k);
            assert_eq!(g.flat(i, j), k);
        }
        // i fastest
        assert_eq!(g.flat(1, 0), 1);
        assert_eq!(g.flat(0, 1), 6);
    }

    #[test]
    fn laplacian_of_quadratics() {
        let g1 = Grid::<f64>::new(Dim::One, 16).unwrap();
        let u = Field::from_fn(g1, |x, _| x * x).unwrap();
        for k in g1.interior() {
            assert!((laplacian(&u, k).unwrap() - 2.0).abs() < 1e-12);
        }
        let g2 = Grid::<f64>::new(Dim::Two, 10).unwrap();
        let u = Field::from_fn(g2, |x, y| x * x + y * y).unwrap();
        for k in g2.interior() {
            assert!((laplacian(&u, k).unwrap() - 4.0).abs() < 1e-12);
        }
        let c = Field::from_fn(g2, |_, _| 3.5).unwrap();
        for k in g2.interior() {
            assert_eq!(laplacian(&c, k).unwrap(), 0.0);
        }
    }

    #[test]
    fn laplacian_rejects_boundary_nodes() {
        let g = Grid::<f64>::new(Dim::Two, 4).unwrap();
        let u = Field::zeros(g);
        assert_eq!(
            laplacian(&u, g.flat(0, 2)).unwrap_err(),
            Error::OutOfDomain { node: [0, 2] }
        );
        assert!(laplacian(&u, 999).is_err());
    }

    #[test]
    fn field_rejects_bad_input() {
        let g = Grid::<f64>::new(Dim::One, 4).unwrap();
        assert!(matches!(
            Field::new(g, vec![0.0; 3]),
            Err(Error::FieldLength {
                expected: 5,
                found: 3
            })
        ));
        assert!(matches!(
            Field::new(g, vec![0.0, 1.0, f64::NAN, 0.0, 0.0]),
            Err(Error::NonFinite { node: [2, 0] })
        ));
        let mut f = Field::zeros(g);
        assert!(f.set(1, f64::INFINITY).is_err());
        assert_eq!(f.get(1), 0.0);
    }
}
