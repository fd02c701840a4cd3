//! Problem instances: force densities `λ⁺`, `λ⁻`, Dirichlet data `g`, and
//! their sampled form on a grid.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Dim, Field, Grid};
use crate::scalar::Scalar;

/// Pointwise function of `(x, y)`; `y` is ignored in 1D.
pub type PointFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;
/// Function of the edge parameter (the free coordinate along an edge).
pub type EdgeFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Dirichlet data on `∂Ω`.
#[derive(Clone)]
pub enum Boundary<T> {
    OneD {
        left: T,
        right: T,
    },
    /// Edge functions. `left`/`right` (x = ∓1) are parametrised by `y`,
    /// `bottom`/`top` (y = ∓1) by `x`. Corners take the `left`/`right` value.
    TwoD {
        left: EdgeFn<T>,
        right: EdgeFn<T>,
        bottom: EdgeFn<T>,
        top: EdgeFn<T>,
    },
}

impl<T: Scalar> Boundary<T> {
    fn dim(&self) -> Dim {
        match self {
            Boundary::OneD { .. } => Dim::One,
            Boundary::TwoD { .. } => Dim::Two,
        }
    }

    /// Value at boundary lattice node `[i, j]` of a grid with `n` subdivisions.
    fn at_node(&self, grid: &Grid<T>, [i, j]: [usize; 2]) -> T {
        let n = grid.n();
        match self {
            Boundary::OneD { left, right } => {
                if i == 0 {
                    *left
                } else {
                    *right
                }
            }
            Boundary::TwoD {
                left,
                right,
                bottom,
                top,
            } => {
                if i == 0 {
                    left(grid.coord(j))
                } else if i == n {
                    right(grid.coord(j))
                } else if j == 0 {
                    bottom(grid.coord(i))
                } else {
                    top(grid.coord(i))
                }
            }
        }
    }

    /// Value at a physical boundary point. Points are matched to an edge with
    /// a small absolute tolerance; `None` for points off `∂Ω`.
    pub fn value(&self, x: T, y: T) -> Option<T> {
        let tol = T::lit(1e-12);
        let on = |a: T, b: f64| (a - T::lit(b)).abs() <= tol;
        match self {
            Boundary::OneD { left, right } => {
                if on(x, -1.0) {
                    Some(*left)
                } else if on(x, 1.0) {
                    Some(*right)
                } else {
                    None
                }
            }
            Boundary::TwoD {
                left,
                right,
                bottom,
                top,
            } => {
                if on(x, -1.0) {
                    Some(left(y))
                } else if on(x, 1.0) {
                    Some(right(y))
                } else if on(y, -1.0) {
                    Some(bottom(x))
                } else if on(y, 1.0) {
                    Some(top(x))
                } else {
                    None
                }
            }
        }
    }
}

/// A two-phase membrane problem on `(-1, 1)` or `(-1, 1)^2`.
#[derive(Clone)]
pub struct ProblemSpec<T> {
    name: String,
    dim: Dim,
    lambda_plus: PointFn<T>,
    lambda_minus: PointFn<T>,
    boundary: Boundary<T>,
    exact: Option<PointFn<T>>,
}

impl<T: Scalar> fmt::Debug for ProblemSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl<T: Scalar> ProblemSpec<T> {
    pub fn new(
        name: impl Into<String>,
        lambda_plus: PointFn<T>,
        lambda_minus: PointFn<T>,
        boundary: Boundary<T>,
    ) -> Self {
        Self {
            name: name.into(),
            dim: boundary.dim(),
            lambda_plus,
            lambda_minus,
            boundary,
            exact: None,
        }
    }

    /// Problem with constant force densities.
    pub fn constant(name: impl Into<String>, plus: T, minus: T, boundary: Boundary<T>) -> Self {
        Self::new(
            name,
            Arc::new(move |_, _| plus),
            Arc::new(move |_, _| minus),
            boundary,
        )
    }

    pub fn with_exact(mut self, exact: PointFn<T>) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn lambda_plus(&self, x: T, y: T) -> T {
        (self.lambda_plus)(x, y)
    }

    pub fn lambda_minus(&self, x: T, y: T) -> T {
        (self.lambda_minus)(x, y)
    }

    pub fn boundary(&self) -> &Boundary<T> {
        &self.boundary
    }

    /// Dirichlet datum at a boundary point, `None` off the boundary.
    pub fn g(&self, x: T, y: T) -> Option<T> {
        self.boundary.value(x, y)
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact(&self, x: T, y: T) -> Option<T> {
        self.exact.as_ref().map(|f| f(x, y))
    }

    pub fn sample(&self, grid: &Grid<T>) -> Result<SampledProblem<T>> {
        sample(self, grid)
    }
}

/// 1D problem `u'' = 8 χ{u>0} - 8 χ{u<0}`, `u(-1) = -1`, `u(1) = 1`, with its
/// piecewise quadratic exact solution.
pub fn example1<T: Scalar>() -> ProblemSpec<T> {
    let eight = T::lit(8.0);
    let exact: PointFn<T> = Arc::new(|x: T, _| {
        let (one, four, half) = (T::one(), T::lit(4.0), T::lit(0.5));
        if x >= half {
            four * x * x - four * x + one
        } else if x <= -half {
            -four * x * x - four * x - one
        } else {
            T::zero()
        }
    });
    ProblemSpec::constant(
        "example1",
        eight,
        eight,
        Boundary::OneD {
            left: -T::one(),
            right: T::one(),
        },
    )
    .with_exact(exact)
}

/// 2D problem `Δu = 2 χ{u>0} - 2 χ{u<0}` with `g = ((1 - y)/2)^2` on `x = ±1`,
/// `g = -x|x|` on `y = -1` and `g = 0` on `y = 1`. No closed-form solution.
pub fn example2<T: Scalar>() -> ProblemSpec<T> {
    let two = T::lit(2.0);
    let side: EdgeFn<T> = Arc::new(|y: T| {
        let s = (T::one() - y) / T::lit(2.0);
        s * s
    });
    ProblemSpec::constant(
        "example2",
        two,
        two,
        Boundary::TwoD {
            left: side.clone(),
            right: side,
            bottom: Arc::new(|x: T| -x * x.abs()),
            top: Arc::new(|_| T::zero()),
        },
    )
}

/// A problem sampled on a grid. All arrays are indexed by flat node index.
#[derive(Debug, Clone)]
pub struct SampledProblem<T> {
    name: String,
    grid: Grid<T>,
    lambda_plus: Vec<T>,
    lambda_minus: Vec<T>,
    g: Vec<T>,
    /// `(L_h g)` with `g` zero-extended into the interior.
    lap_g: Vec<T>,
    lambda_tilde_plus: Vec<T>,
    lambda_tilde_minus: Vec<T>,
}

/// Samples `spec` on `grid`. `λ±` are kept at interior nodes only and `g` at
/// boundary nodes only (both zero elsewhere).
pub fn sample<T: Scalar>(spec: &ProblemSpec<T>, grid: &Grid<T>) -> Result<SampledProblem<T>> {
    if spec.dim != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim.as_usize(),
            found: grid.dim().as_usize(),
        });
    }
    let count = grid.node_count();
    let mut lp = vec![T::zero(); count];
    let mut lm = vec![T::zero(); count];
    let mut g = vec![T::zero(); count];
    for k in 0..count {
        let [x, y] = grid.position(k);
        if grid.is_interior(k) {
            lp[k] = spec.lambda_plus(x, y);
            lm[k] = spec.lambda_minus(x, y);
        } else {
            g[k] = spec.boundary.at_node(grid, grid.multi(k));
        }
    }
    SampledProblem::build(spec.name.clone(), *grid, lp, lm, g)
}

impl<T: Scalar> SampledProblem<T> {
    /// Builds a sampled problem from nodal arrays (full node count each).
    /// Entries of `λ±` on the boundary and of `g` in the interior are ignored.
    pub fn from_nodal(
        name: impl Into<String>,
        grid: Grid<T>,
        lambda_plus: Vec<T>,
        lambda_minus: Vec<T>,
        g: Vec<T>,
    ) -> Result<Self> {
        for v in [&lambda_plus, &lambda_minus, &g] {
            if v.len() != grid.node_count() {
                return Err(Error::FieldLength {
                    expected: grid.node_count(),
                    found: v.len(),
                });
            }
        }
        Self::build(name.into(), grid, lambda_plus, lambda_minus, g)
    }

    fn build(
        name: String,
        grid: Grid<T>,
        mut lp: Vec<T>,
        mut lm: Vec<T>,
        mut g: Vec<T>,
    ) -> Result<Self> {
        for k in 0..grid.node_count() {
            if grid.is_interior(k) {
                g[k] = T::zero();
                let node = grid.multi(k);
                let (a, b) = (lp[k], lm[k]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::NonFinite { node });
                }
                if a < T::zero() || b < T::zero() {
                    return Err(Error::InvalidProblem {
                        node,
                        reason: format!("negative force density (λ⁺ = {a}, λ⁻ = {b})"),
                    });
                }
                if a + b <= T::zero() {
                    return Err(Error::InvalidProblem {
                        node,
                        reason: format!("λ⁺ + λ⁻ = {} is not positive", a + b),
                    });
                }
            } else {
                lp[k] = T::zero();
                lm[k] = T::zero();
                if !g[k].is_finite() {
                    return Err(Error::NonFinite {
                        node: grid.multi(k),
                    });
                }
            }
        }
        let mut lap_g = vec![T::zero(); grid.node_count()];
        let mut ltp = vec![T::zero(); grid.node_count()];
        let mut ltm = vec![T::zero(); grid.node_count()];
        for k in grid.interior() {
            // g vanishes at interior nodes, so only boundary neighbours contribute
            lap_g[k] = grid.neighbor_sum(&g, k) / grid.h2();
            ltp[k] = lp[k] - lap_g[k];
            ltm[k] = lm[k] + lap_g[k];
        }
        Ok(Self {
            name,
            grid,
            lambda_plus: lp,
            lambda_minus: lm,
            g,
            lap_g,
            lambda_tilde_plus: ltp,
            lambda_tilde_minus: ltm,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn lambda_plus(&self) -> &[T] {
        &self.lambda_plus
    }

    pub fn lambda_minus(&self) -> &[T] {
        &self.lambda_minus
    }

    /// Boundary data, zero at interior nodes.
    pub fn g(&self) -> &[T] {
        &self.g
    }

    /// `L_h g` of the zero-extended boundary data; nonzero only next to `∂Ω`.
    pub fn lap_g(&self) -> &[T] {
        &self.lap_g
    }

    /// `λ̃⁺ = λ⁺ - (boundary neighbour sum of g) / h²`.
    pub fn lambda_tilde_plus(&self) -> &[T] {
        &self.lambda_tilde_plus
    }

    /// `λ̃⁻ = λ⁻ + (boundary neighbour sum of g) / h²`, so that `-λ̃⁻` is the
    /// right-hand side of the negative phase in `ũ`. The corrections of `λ̃⁺`
    /// and `λ̃⁻` cancel: `λ̃⁺ + λ̃⁻ = λ⁺ + λ⁻`.
    pub fn lambda_tilde_minus(&self) -> &[T] {
        &self.lambda_tilde_minus
    }

    /// `max(λ⁺ + λ⁻)` over interior nodes.
    pub fn max_lambda_sum(&self) -> T {
        self.grid
            .interior()
            .map(|k| self.lambda_plus[k] + self.lambda_minus[k])
            .fold(T::zero(), T::max)
    }

    /// The boundary data as a field (zero in the interior).
    pub fn g_field(&self) -> Field<T> {
        Field::from_raw(self.grid, self.g.clone())
    }

    /// `u = ũ + g` for a zero-boundary field `ũ`.
    pub fn lift(&self, tilde: &[T]) -> Field<T> {
        let values = tilde.iter().zip(&self.g).map(|(&a, &b)| a + b).collect();
        Field::from_raw(self.grid, values)
    }

    /// `ũ = u - g`, with boundary entries set to exactly zero.
    pub fn homogenize(&self, u: &Field<T>) -> Vec<T> {
        (0..self.grid.node_count())
            .map(|k| {
                if self.grid.is_interior(k) {
                    u.get(k)
                } else {
                    T::zero()
                }
            })
            .collect()
    }

    /// Same problem with `λ±` multiplied by `factor`.
    pub fn scaled_lambdas(&self, factor: T) -> Result<Self> {
        Self::build(
            self.name.clone(),
            self.grid,
            self.lambda_plus.iter().map(|&v| v * factor).collect(),
            self.lambda_minus.iter().map(|&v| v * factor).collect(),
            self.g.clone(),
        )
    }
}

/// Problem read from a config file: constant `λ±` and polynomial boundary
/// data per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub dim: Dim,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub boundary: BoundaryConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryConfig {
    OneD {
        left: f64,
        right: f64,
    },
    /// Ascending-power coefficients in the edge parameter.
    TwoD {
        left: Vec<f64>,
        right: Vec<f64>,
        bottom: Vec<f64>,
        top: Vec<f64>,
    },
}

/// Corner mismatch tolerance for 2D edge polynomials.
pub const CORNER_TOLERANCE: f64 = 1e-9;

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

impl ProblemConfig {
    /// Parses the `[problem]` / `[boundary]` key-value format.
    ///
    /// ```text
    /// [problem]
    /// dim = 2
    /// lambda_plus = 2
    /// lambda_minus = 2
    ///
    /// [boundary]
    /// edge_left_coeffs = 0.25, -0.5, 0.25
    /// edge_right_coeffs = 0.25, -0.5, 0.25
    /// edge_bottom_coeffs = 0
    /// edge_top_coeffs = 0
    /// ```
    ///
    /// 1D files use `g_left` / `g_right` instead of the edge lists. `#` starts
    /// a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut section = String::new();
        let mut dim = None;
        let mut lp = None;
        let mut lm = None;
        let mut g_left = None;
        let mut g_right = None;
        let mut edges: [Option<Vec<f64>>; 4] = Default::default();
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(format!("malformed section header `{line}`")))?
                    .trim();
                if name != "problem" && name != "boundary" {
                    return Err(err(format!("unknown section `[{name}]`")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| -> Result<f64> {
                let x: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("`{key}`: `{}` is not a number", v.trim())))?;
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(err(format!("`{key}`: value must be finite")))
                }
            };
            match (section.as_str(), key) {
                ("problem", "dim") => {
                    let d: usize = value
                        .parse()
                        .map_err(|_| err(format!("`dim`: `{value}` is not an integer")))?;
                    dim = Some(Dim::from_usize(d).map_err(|e| err(e.to_string()))?);
                }
                ("problem", "lambda_plus") => lp = Some(number(value)?),
                ("problem", "lambda_minus") => lm = Some(number(value)?),
                ("boundary", "g_left") => g_left = Some(number(value)?),
                ("boundary", "g_right") => g_right = Some(number(value)?),
                ("boundary", edge) if edge.starts_with("edge_") && edge.ends_with("_coeffs") => {
                    let slot = match &edge[5..edge.len() - 7] {
                        "left" => 0,
                        "right" => 1,
                        "bottom" => 2,
                        "top" => 3,
                        other => return Err(err(format!("unknown edge `{other}`"))),
                    };
                    let coeffs = value.split(',').map(number).collect::<Result<Vec<_>>>()?;
                    edges[slot] = Some(coeffs);
                }
                ("", _) => return Err(err(format!("key `{key}` outside of a section"))),
                (s, k) => return Err(err(format!("unknown key `{k}` in section [{s}]"))),
            }
        }

        let missing = |what: &str| Error::Parse {
            line: last_line,
            message: format!("missing `{what}`"),
        };
        let dim = dim.ok_or_else(|| missing("dim"))?;
        let lambda_plus = lp.ok_or_else(|| missing("lambda_plus"))?;
        let lambda_minus = lm.ok_or_else(|| missing("lambda_minus"))?;
        let boundary = match dim {
            Dim::One => BoundaryConfig::OneD {
                left: g_left.ok_or_else(|| missing("g_left"))?,
                right: g_right.ok_or_else(|| missing("g_right"))?,
            },
            Dim::Two => {
                let [l, r, b, t] = edges;
                BoundaryConfig::TwoD {
                    left: l.ok_or_else(|| missing("edge_left_coeffs"))?,
                    right: r.ok_or_else(|| missing("edge_right_coeffs"))?,
                    bottom: b.ok_or_else(|| missing("edge_bottom_coeffs"))?,
                    top: t.ok_or_else(|| missing("edge_top_coeffs"))?,
                }
            }
        };
        let config = Self {
            dim,
            lambda_plus,
            lambda_minus,
            boundary,
        };
        config.validate(last_line)?;
        Ok(config)
    }

    fn validate(&self, line: usize) -> Result<()> {
        let fail = |message: String| Err(Error::Parse { line, message });
        if self.lambda_plus < 0.0 || self.lambda_minus < 0.0 {
            return fail("force densities must be nonnegative".into());
        }
        if self.lambda_plus + self.lambda_minus <= 0.0 {
            return fail("lambda_plus + lambda_minus must be positive".into());
        }
        if let BoundaryConfig::TwoD {
            left,
            right,
            bottom,
            top,
        } = &self.boundary
        {
            // (vertical edge, its parameter y, horizontal edge, its parameter x)
            let corners = [
                ("bottom-left", left, -1.0, bottom, -1.0),
                ("top-left", left, 1.0, top, -1.0),
                ("bottom-right", right, -1.0, bottom, 1.0),
                ("top-right", right, 1.0, top, 1.0),
            ];
            for (name, vertical, y, horizontal, x) in corners {
                let (a, b) = (horner(vertical, y), horner(horizontal, x));
                if (a - b).abs() > CORNER_TOLERANCE {
                    return fail(format!(
                        "edge polynomials disagree at the {name} corner ({a} vs {b})"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_spec<T: Scalar>(&self, name: impl Into<String>) -> ProblemSpec<T> {
        let boundary = match &self.boundary {
            BoundaryConfig::OneD { left, right } => Boundary::OneD {
                left: T::lit(*left),
                right: T::lit(*right),
            },
            BoundaryConfig::TwoD {
                left,
                right,
                bottom,
                top,
            } => {
                let poly = |c: &Vec<f64>| -> EdgeFn<T> {
                    let c: Vec<T> = c.iter().map(|&v| T::lit(v)).collect();
                    Arc::new(move |t: T| c.iter().rev().fold(T::zero(), |acc, &v| acc * t + v))
                };
                Boundary::TwoD {
                    left: poly(left),
                    right: poly(right),
                    bottom: poly(bottom),
                    top: poly(top),
                }
            }
        };
        ProblemSpec::constant(
            name,
            T::lit(self.lambda_plus),
            T::lit(self.lambda_minus),
            boundary,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_exact_values() {
        let p = example1::<f64>();
        assert_eq!(p.exact(0.75, 0.0), Some(0.25));
        assert_eq!(p.exact(0.0, 0.0), Some(0.0));
        assert_eq!(p.exact(-1.0, 0.0), Some(-1.0));
        assert_eq!(p.g(-1.0, 0.0), Some(-1.0));
        assert_eq!(p.g(1.0, 0.0), Some(1.0));
        assert_eq!(p.g(0.3, 0.0), None);
    }

    #[test]
    fn example2_boundary_values() {
        let p = example2::<f64>();
        assert_eq!(p.g(1.0, -1.0), Some(1.0));
        assert_eq!(p.g(-1.0, 1.0), Some(0.0));
        assert_eq!(p.g(0.5, -1.0), Some(-0.25));
        assert_eq!(p.g(0.5, 1.0), Some(0.0));
        assert!(!p.has_exact());
    }

    #[test]
    fn example1_exact_matches_boundary() {
        let p = example1::<f64>();
        for x in [-1.0, 1.0] {
            assert!((p.exact(x, 0.0).unwrap() - p.g(x, 0.0).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn example1_exact_solves_the_pde() {
        let p = example1::<f64>();
        let u = |x: f64| p.exact(x, 0.0).unwrap();
        let du = |x: f64| {
            if x >= 0.5 {
                8.0 * x - 4.0
            } else if x <= -0.5 {
                -8.0 * x - 4.0
            } else {
                0.0
            }
        };
        // second derivative 8 on |x| > 0.5 via centred differences
        let d = 1e-4;
        for x in [-0.9, -0.7, -0.55, 0.55, 0.8, 0.95] {
            let second = (u(x - d) - 2.0 * u(x) + u(x + d)) / (d * d);
            let expected = if x > 0.0 { 8.0 } else { -8.0 };
            assert!((second - expected).abs() < 1e-4, "{x}: {second}");
        }
        for x in [-0.5, -0.2, 0.0, 0.3, 0.5] {
            assert_eq!(u(x), 0.0);
        }
        // C^1 across the kinks: one-sided difference quotients approach u' = 0
        for x in [-0.5, 0.5] {
            let e = 1e-7;
            let right = (u(x + e) - u(x)) / e;
            let left = (u(x) - u(x - e)) / e;
            assert!(right.abs() < 1e-6 && left.abs() < 1e-6);
            assert_eq!(du(x), 0.0);
        }
    }

    #[test]
    fn example1_modified_coefficients() {
        let grid = Grid::<f64>::new(Dim::One, 20).unwrap();
        let s = example1().sample(&grid).unwrap();
        assert!((s.lambda_tilde_plus()[1] - 108.0).abs() < 1e-9);
        assert!((s.lambda_tilde_plus()[19] + 92.0).abs() < 1e-9);
        assert_eq!(s.lambda_tilde_plus()[10], 8.0);
        assert_eq!(s.lambda_tilde_minus()[10], 8.0);
        assert!((s.lambda_tilde_minus()[1] + 92.0).abs() < 1e-9);
        assert!((s.lambda_tilde_minus()[19] - 108.0).abs() < 1e-9);
    }

    #[test]
    fn corrections_cancel_across_signs() {
        let grid = Grid::<f64>::new(Dim::Two, 7).unwrap();
        let s = example2().sample(&grid).unwrap();
        for k in grid.interior() {
            let dp = s.lambda_tilde_plus()[k] - s.lambda_plus()[k];
            let dm = s.lambda_tilde_minus()[k] - s.lambda_minus()[k];
            let expected = -grid.neighbor_sum(s.g(), k) / grid.h2();
            assert!((dp - expected).abs() < 1e-9 * (1.0 + expected.abs()));
            assert!((dp + dm).abs() < 1e-9 * (1.0 + expected.abs()));
            let sum_tilde = s.lambda_tilde_plus()[k] + s.lambda_tilde_minus()[k];
            let sum = s.lambda_plus()[k] + s.lambda_minus()[k];
            assert!((sum_tilde - sum).abs() < 1e-9 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn two_boundary_edge_contributions_are_summed() {
        let grid = Grid::<f64>::new(Dim::Two, 4).unwrap();
        let s = example2().sample(&grid).unwrap();
        // node (1,1) touches the left edge at (0,1) and the bottom edge at (1,0)
        let k = grid.flat(1, 1);
        let g_left = ((1.0 - grid.coord(1)) / 2.0).powi(2);
        let x = grid.coord(1);
        let g_bottom = -x * x.abs();
        let expected = 2.0 - (g_left + g_bottom) / grid.h2();
        assert!((s.lambda_tilde_plus()[k] - expected).abs() < 1e-12);
    }

    #[test]
    fn sampling_rejects_bad_data() {
        let grid = Grid::<f64>::new(Dim::One, 4).unwrap();
        let bad = ProblemSpec::constant(
            "bad",
            0.0,
            0.0,
            Boundary::OneD {
                left: 0.0,
                right: 0.0,
            },
        );
        match bad.sample(&grid) {
            Err(Error::InvalidProblem { node, .. }) => assert_eq!(node, [1, 0]),
            other => panic!("unexpected {other:?}"),
        }
        let neg = ProblemSpec::constant(
            "neg",
            -1.0,
            2.0,
            Boundary::OneD {
                left: 0.0,
                right: 0.0,
            },
        );
        assert!(neg.sample(&grid).is_err());
        let g2 = Grid::<f64>::new(Dim::Two, 4).unwrap();
        assert!(matches!(
            example1::<f64>().sample(&g2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn parses_two_dimensional_config() {
        let text = "\
# example 2 with polynomial edges
[problem]
dim = 2
lambda_plus = 2
lambda_minus = 2

[boundary]
edge_left_coeffs = 0.25, -0.5, 0.25
edge_right_coeffs = 0.25, -0.5, 0.25
edge_bottom_coeffs = 1
edge_top_coeffs = 0
";
        let cfg = ProblemConfig::parse(text).unwrap();
        assert_eq!(cfg.dim, Dim::Two);
        let spec = cfg.to_spec::<f64>("cfg");
        assert_eq!(spec.g(-1.0, 0.0), Some(0.25));
        assert_eq!(spec.g(0.3, -1.0), Some(1.0));
    }

    #[test]
    fn parses_one_dimensional_config() {
        let text = "[problem]\ndim = 1\nlambda_plus = 8\nlambda_minus = 8\n[boundary]\ng_left = -1\ng_right = 1\n";
        let cfg = ProblemConfig::parse(text).unwrap();
        assert_eq!(
            cfg.boundary,
            BoundaryConfig::OneD {
                left: -1.0,
                right: 1.0
            }
        );
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let text = "[problem]\ndim = 1\nlambda_plus = eight\n";
        assert_eq!(
            ProblemConfig::parse(text).unwrap_err(),
            Error::Parse {
                line: 3,
                message: "`lambda_plus`: `eight` is not a number".into()
            }
        );
        let text = "dim = 1\n";
        assert!(matches!(
            ProblemConfig::parse(text),
            Err(Error::Parse { line: 1, .. })
        ));
        let text = "[problem]\ndim = 1\n[boundary]\nfoo = 3\n";
        assert!(matches!(
            ProblemConfig::parse(text),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn config_rejects_discontinuous_corners() {
        // -x|x| is not polynomial; bottom = -x^2 disagrees with the sides at (1, -1)
        let text = "\
[problem]
dim = 2
lambda_plus = 2
lambda_minus = 2
[boundary]
edge_left_coeffs = 0.25, -0.5, 0.25
edge_right_coeffs = 0.25, -0.5, 0.25
edge_bottom_coeffs = 0, 0, -1
edge_top_coeffs = 0
";
        let err = ProblemConfig::parse(text).unwrap_err();
        assert!(err.to_string().contains("corner"), "{err}");
    }
}
