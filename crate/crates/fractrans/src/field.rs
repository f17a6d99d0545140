//! Coefficient fields, one-dimensional data functions, and node-indexed
//! solution fields.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exprlang::{EvalError, ExprAst, Var};
use crate::grid::UniformGrid;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FieldError {
    #[error("tabulated field has {got} values but the grid has {expected} nodes")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("expression evaluation failed at node (i={i}, n={n}), x={x}, t={t}: {source}")]
    Eval {
        i: usize,
        n: usize,
        x: f64,
        t: f64,
        source: EvalError,
    },
    #[error("field value at node (i={i}, n={n}) is not finite")]
    NonFinite { i: usize, n: usize },
}

/// A scalar coefficient over the space-time rectangle: a constant, a parsed
/// expression in `(x, t)`, a node table bound to a grid shape, or an opaque
/// function (used by programmatic construction and tests).
#[derive(Clone)]
pub enum CoefficientField {
    Constant(f64),
    Expr(Arc<ExprAst>),
    /// Row-major over time: `values[n * (nx + 1) + i]`.
    Tabulated {
        values: Arc<Vec<f64>>,
        nx: usize,
        nt: usize,
    },
    Function(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl CoefficientField {
    pub fn expr(ast: ExprAst) -> Self {
        CoefficientField::Expr(Arc::new(ast))
    }

    pub fn function(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        CoefficientField::Function(Arc::new(f))
    }

    /// Evaluates the coefficient at grid node `(i, n)`. Deterministic and
    /// total on the grid: any evaluation failure or non-finite value is an
    /// error, never a silent NaN.
    pub fn at(&self, grid: &UniformGrid, i: usize, n: usize) -> Result<f64, FieldError> {
        let v = match self {
            CoefficientField::Constant(c) => *c,
            CoefficientField::Expr(ast) => {
                let (x, t) = (grid.x(i), grid.t(n));
                ast.eval(x, t)
                    .map_err(|source| FieldError::Eval { i, n, x, t, source })?
            }
            CoefficientField::Tabulated { values, nx, nt } => {
                if *nx != grid.nx() || *nt != grid.nt() || values.len() != grid.node_count() {
                    return Err(FieldError::DimensionMismatch {
                        got: values.len(),
                        expected: grid.node_count(),
                    });
                }
                values[n * (nx + 1) + i]
            }
            CoefficientField::Function(f) => f(grid.x(i), grid.t(n)),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(FieldError::NonFinite { i, n })
        }
    }

    /// Evaluates the coefficient on every node of `grid`, row-major over time.
    pub fn sample(&self, grid: &UniformGrid) -> Result<Vec<f64>, FieldError> {
        let mut out = Vec::with_capacity(grid.node_count());
        for n in 0..=grid.nt() {
            for i in 0..=grid.nx() {
                out.push(self.at(grid, i, n)?);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Constant(c) => write!(f, "Constant({c})"),
            CoefficientField::Expr(ast) => write!(f, "Expr({ast})"),
            CoefficientField::Tabulated { nx, nt, .. } => {
                write!(f, "Tabulated({}x{})", nx + 1, nt + 1)
            }
            CoefficientField::Function(_) => write!(f, "Function(<opaque>)"),
        }
    }
}

/// A one-variable data function: the initial profile `a(x)` or the boundary
/// signal `g(t)`. Expression-backed data binds its named variable to the
/// argument; the other variable is never consulted.
#[derive(Clone)]
pub enum DataFn {
    Constant(f64),
    Expr(Arc<ExprAst>, Var),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl DataFn {
    pub fn expr(ast: ExprAst, var: Var) -> Self {
        DataFn::Expr(Arc::new(ast), var)
    }

    pub fn function(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        DataFn::Function(Arc::new(f))
    }

    pub fn eval(&self, arg: f64) -> Result<f64, EvalError> {
        match self {
            DataFn::Constant(c) => Ok(*c),
            DataFn::Expr(ast, Var::X) => ast.eval(arg, 0.0),
            DataFn::Expr(ast, Var::T) => ast.eval(0.0, arg),
            DataFn::Function(f) => Ok(f(arg)),
        }
    }
}

impl fmt::Debug for DataFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataFn::Constant(c) => write!(f, "Constant({c})"),
            DataFn::Expr(ast, var) => write!(f, "Expr({ast}, in {var:?})"),
            DataFn::Function(_) => write!(f, "Function(<opaque>)"),
        }
    }
}

/// Extrema of a field over the discrete initial/inflow boundary (the row
/// `n = 0` union the column `i = 0`), with attaining node indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryExtrema {
    pub max: f64,
    pub max_node: (usize, usize),
    pub min: f64,
    pub min_node: (usize, usize),
}

/// A node-indexed numeric field `u(x_i, t_n)` with its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    grid: UniformGrid,
    /// Row-major over time: `values[n * (nx + 1) + i]`.
    values: Vec<f64>,
}

impl SolutionField {
    /// A field filled with `value` everywhere.
    pub fn constant(grid: UniformGrid, value: f64) -> Self {
        let values = vec![value; grid.node_count()];
        SolutionField { grid, values }
    }

    /// Builds a field from explicit node values (row-major over time).
    pub fn from_values(grid: UniformGrid, values: Vec<f64>) -> Result<Self, FieldError> {
        if values.len() != grid.node_count() {
            return Err(FieldError::DimensionMismatch {
                got: values.len(),
                expected: grid.node_count(),
            });
        }
        Ok(SolutionField { grid, values })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    #[inline]
    pub fn get(&self, i: usize, n: usize) -> f64 {
        self.values[n * (self.grid.nx() + 1) + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, n: usize, v: f64) {
        self.values[n * (self.grid.nx() + 1) + i] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Max and min over the whole grid with attaining nodes.
    pub fn grid_extrema(&self) -> BoundaryExtrema {
        let mut ext = BoundaryExtrema {
            max: f64::NEG_INFINITY,
            max_node: (0, 0),
            min: f64::INFINITY,
            min_node: (0, 0),
        };
        for n in 0..=self.grid.nt() {
            for i in 0..=self.grid.nx() {
                ext.update(i, n, self.get(i, n));
            }
        }
        ext
    }

    /// Sup over the grid of `|self - other|` (grids must match).
    pub fn sup_diff(&self, other: &SolutionField) -> f64 {
        assert_eq!(self.grid, other.grid, "sup_diff requires matching grids");
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl BoundaryExtrema {
    fn update(&mut self, i: usize, n: usize, v: f64) {
        if v > self.max {
            self.max = v;
            self.max_node = (i, n);
        }
        if v < self.min {
            self.min = v;
            self.min_node = (i, n);
        }
    }
}

/// Max and min of `field` over the closure of the initial/inflow boundary:
/// the row `n = 0` union the column `i = 0`.
pub fn boundary_extrema(field: &SolutionField) -> BoundaryExtrema {
    let grid = field.grid();
    let mut ext = BoundaryExtrema {
        max: f64::NEG_INFINITY,
        max_node: (0, 0),
        min: f64::INFINITY,
        min_node: (0, 0),
    };
    for i in 0..=grid.nx() {
        ext.update(i, 0, field.get(i, 0));
    }
    for n in 0..=grid.nt() {
        ext.update(0, n, field.get(0, n));
    }
    ext
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprlang::parse_str;

    fn grid() -> UniformGrid {
        UniformGrid::new(0.0, 1.0, 1.0, 4, 4).unwrap()
    }

    #[test]
    fn linear_initial_row_dominates_boundary() {
        // u(x_i, 0) = x_i on [0, 1], u(0, t_n) = 0, interior arbitrary junk.
        let g = grid();
        let mut f = SolutionField::constant(g, 0.5);
        for i in 0..=g.nx() {
            f.set(i, 0, g.x(i));
        }
        for n in 1..=g.nt() {
            f.set(0, n, 0.0);
        }
        let ext = boundary_extrema(&f);
        assert_eq!(ext.max, 1.0);
        assert_eq!(ext.max_node, (4, 0));
        assert_eq!(ext.min, 0.0);
        // The reported node attains the reported value.
        assert_eq!(f.get(ext.min_node.0, ext.min_node.1), ext.min);
    }

    #[test]
    fn constant_field_extrema() {
        let f = SolutionField::constant(grid(), 3.25);
        let ext = boundary_extrema(&f);
        assert_eq!((ext.max, ext.min), (3.25, 3.25));
        assert!(ext.min <= ext.max);
    }

    #[test]
    fn gaussian_initial_row_peaks_at_zero() {
        // Truncated-line setup: a(x) = exp(-x^2) on [-8, 8]; the inflow
        // column carries the frozen far-field value.
        let g = UniformGrid::new(-8.0, 8.0, 1.0, 32, 4).unwrap();
        let mut f = SolutionField::constant(g, 0.2);
        for i in 0..=g.nx() {
            f.set(i, 0, (-g.x(i) * g.x(i)).exp());
        }
        for n in 1..=g.nt() {
            f.set(0, n, (-64.0f64).exp());
        }
        let ext = boundary_extrema(&f);
        assert_eq!(ext.max, 1.0);
        assert_eq!(ext.max_node, (16, 0), "maximum sits at x = 0");
    }

    #[test]
    fn tabulated_dimension_mismatch_is_structural() {
        let g = grid();
        let field = CoefficientField::Tabulated {
            values: Arc::new(vec![0.0; 7]),
            nx: 2,
            nt: 2,
        };
        assert!(matches!(
            field.at(&g, 0, 0),
            Err(FieldError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn expression_field_evaluates_at_nodes() {
        let g = grid();
        let field = CoefficientField::expr(parse_str("x*t").unwrap());
        assert_eq!(field.at(&g, 4, 4).unwrap(), 1.0);
        assert_eq!(field.at(&g, 2, 4).unwrap(), 0.5);
    }

    #[test]
    fn data_fn_binds_declared_variable() {
        let a = DataFn::expr(parse_str("x^2").unwrap(), Var::X);
        let gfn = DataFn::expr(parse_str("1+t").unwrap(), Var::T);
        assert_eq!(a.eval(3.0).unwrap(), 9.0);
        assert_eq!(gfn.eval(3.0).unwrap(), 4.0);
    }
}
