//! Implicit time-marching solvers.
//!
//! All solvers share one discretization: fully implicit coupling of every
//! term at the new time level, L1 kernels for fractional orders, exact
//! two-point differences at order 1. The spatial Caputo operator integrates
//! from the left edge, so each time level is a lower-triangular system in
//! the space index and a single forward sweep `i = 1..nx` solves it. The
//! diagonal
//!
//! ```text
//! D = sum_i p_i tau^{-alpha_i} b_0^{(alpha_i)}
//!   + sum_j q_j h^{-beta_j}  b_0^{(beta_j)}  -  r
//! ```
//!
//! is positive for every admissible problem and every off-diagonal
//! contribution is non-positive, so the sweep preserves the M-matrix sign
//! pattern that makes the discrete maximum principle exact.

mod cauchy;
mod fode;
mod semilinear;

pub use cauchy::{decaying_bump_scenario, solve_cauchy_truncated, CauchySpec};
pub use fode::solve_multiterm_fode;
pub use semilinear::{
    solve_semilinear, InitialIterate, PicardOptions, SemilinearAdmissibilityError,
    SemilinearSolution, SemilinearTerm,
};

use thiserror::Error;

use crate::exprlang::EvalError;
use crate::field::{FieldError, SolutionField};
use crate::fracops::{build_weights, L1Weights};
use crate::problem::{validate_problem, ProblemSpec, ValidationError, Violation, P_FLOOR};

#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("problem is not admissible: {}", format_violations(.0))]
    Inadmissible(Vec<Violation>),
    #[error("structural problem: {0}")]
    Structural(#[from] ValidationError),
    #[error("field evaluation failed: {0}")]
    Field(#[from] FieldError),
    #[error("data function failed to evaluate: {0}")]
    Data(#[from] EvalError),
    #[error("internal invariant breach: diagonal {diag} below the positivity floor at node (i={i}, n={n})")]
    DiagonalBreach { i: usize, n: usize, diag: f64 },
    #[error("Picard iteration did not converge at level {level} within {} iterations; residual history {residuals:?}", residuals.len())]
    PicardNonConvergence { level: usize, residuals: Vec<f64> },
    #[error("semilinear solves require identically zero forcing; found {value} at node (i={i}, n={n})")]
    ForcingNotZero { i: usize, n: usize, value: f64 },
    #[error("advection coefficient must be positive on the truncated domain; found {value} at node i={i}, x={x}")]
    NonPositiveAdvection { i: usize, x: f64, value: f64 },
    #[error("grid spans [{got_min}, {got_max}] but the truncation is [{want_min}, {want_max}]")]
    GridMismatch {
        want_min: f64,
        want_max: f64,
        got_min: f64,
        got_max: f64,
    },
    #[error("interior window [{w_left}, {w_right}] is closer than {margin} to the truncation [{x_left}, {x_right}]")]
    WindowMargin {
        x_left: f64,
        x_right: f64,
        w_left: f64,
        w_right: f64,
        margin: f64,
    },
    #[error("solver produced a non-finite value at node (i={i}, n={n})")]
    NonFinite { i: usize, n: usize },
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Precomputed per-term data: L1 weights plus the coefficient sampled on
/// every node (row-major over time).
struct TermTable {
    weights: L1Weights,
    coeff: Vec<f64>,
}

/// Everything the sweep needs, sampled once.
pub(crate) struct Assembly {
    nx: usize,
    nt: usize,
    time: Vec<TermTable>,
    space: Vec<TermTable>,
    reaction: Vec<f64>,
    forcing: Vec<f64>,
    initial_row: Vec<f64>,
    boundary_col: Vec<f64>,
    time_order: Vec<usize>,
    space_order: Vec<usize>,
}

impl Assembly {
    fn new(
        spec: &ProblemSpec,
        time_order: Vec<usize>,
        space_order: Vec<usize>,
    ) -> Result<Self, SolveError> {
        let violations = validate_problem(spec)?;
        if !violations.is_empty() {
            return Err(SolveError::Inadmissible(violations));
        }
        let grid = &spec.grid;
        let (nx, nt) = (grid.nx(), grid.nt());
        let (h, tau) = (grid.h(), grid.tau());

        let mut time = Vec::with_capacity(spec.time_terms.len());
        for (order, coeff) in &spec.time_terms {
            let weights = build_weights(*order, tau, nt);
            debug_assert!(weights.weights().windows(2).all(|w| w[1] < w[0]));
            time.push(TermTable { weights, coeff: coeff.sample(grid)? });
        }
        let mut space = Vec::with_capacity(spec.space_terms.len());
        for (order, coeff) in &spec.space_terms {
            let weights = build_weights(*order, h, nx);
            debug_assert!(weights.weights().windows(2).all(|w| w[1] < w[0]));
            space.push(TermTable { weights, coeff: coeff.sample(grid)? });
        }

        let mut initial_row = Vec::with_capacity(nx + 1);
        for i in 0..=nx {
            initial_row.push(spec.initial.eval(grid.x(i))?);
        }
        let mut boundary_col = Vec::with_capacity(nt + 1);
        for n in 0..=nt {
            boundary_col.push(spec.boundary.eval(grid.t(n))?);
        }

        debug_assert_eq!(time_order.len(), time.len());
        debug_assert_eq!(space_order.len(), space.len());

        Ok(Assembly {
            nx,
            nt,
            time,
            space,
            reaction: spec.reaction.sample(grid)?,
            forcing: spec.forcing.sample(grid)?,
            initial_row,
            boundary_col,
            time_order,
            space_order,
        })
    }

    #[inline]
    fn node(&self, i: usize, n: usize) -> usize {
        n * (self.nx + 1) + i
    }

    pub(crate) fn nt(&self) -> usize {
        self.nt
    }

    pub(crate) fn nx(&self) -> usize {
        self.nx
    }

    /// Seeds the field with the imposed data: the whole initial row from
    /// `a`, the inflow column from `g` for `n >= 1`. The corner keeps the
    /// initial value; admissibility guarantees both agree within tolerance.
    pub(crate) fn seed(&self, field: &mut SolutionField) {
        for i in 0..=self.nx {
            field.set(i, 0, self.initial_row[i]);
        }
        for n in 1..=self.nt {
            field.set(0, n, self.boundary_col[n]);
        }
    }

    /// Solves level `n` by one forward sweep, writing into `field`.
    /// `source(i)` supplies the source value at node `(i, n)`.
    pub(crate) fn sweep_level<S: Fn(usize) -> f64>(
        &self,
        field: &mut SolutionField,
        n: usize,
        source: S,
    ) -> Result<(), SolveError> {
        for i in 1..=self.nx {
            let node = self.node(i, n);
            let mut diag = 0.0f64;
            let mut rhs = source(i);

            for &ti in &self.time_order {
                let term = &self.time[ti];
                let c = term.coeff[node];
                if term.weights.is_backward_difference() {
                    let s = c * term.weights.scale();
                    diag += s;
                    rhs += s * field.get(i, n - 1);
                } else {
                    let s = c * term.weights.scale();
                    let b = term.weights.weights();
                    diag += s * b[0];
                    rhs += s * b[0] * field.get(i, n - 1);
                    let mut hist = 0.0f64;
                    for k in 1..n {
                        hist += b[k] * (field.get(i, n - k) - field.get(i, n - k - 1));
                    }
                    rhs -= s * hist;
                }
            }

            for &sj in &self.space_order {
                let term = &self.space[sj];
                let c = term.coeff[node];
                if term.weights.is_backward_difference() {
                    let s = c * term.weights.scale();
                    diag += s;
                    rhs += s * field.get(i - 1, n);
                } else {
                    let s = c * term.weights.scale();
                    let b = term.weights.weights();
                    diag += s * b[0];
                    rhs += s * b[0] * field.get(i - 1, n);
                    let mut hist = 0.0f64;
                    for k in 1..i {
                        hist += b[k] * (field.get(i - k, n) - field.get(i - k - 1, n));
                    }
                    rhs -= s * hist;
                }
            }

            diag -= self.reaction[node];
            debug_assert!(diag > 0.0, "monotone structure lost at (i={i}, n={n})");
            if diag < P_FLOOR {
                return Err(SolveError::DiagonalBreach { i, n, diag });
            }
            let value = rhs / diag;
            if !value.is_finite() {
                return Err(SolveError::NonFinite { i, n });
            }
            field.set(i, n, value);
        }
        Ok(())
    }

    pub(crate) fn forcing_at(&self, i: usize, n: usize) -> f64 {
        self.forcing[self.node(i, n)]
    }

    pub(crate) fn forcing_table(&self) -> &[f64] {
        &self.forcing
    }

    pub(crate) fn boundary_at(&self, n: usize) -> f64 {
        self.boundary_col[n]
    }
}

pub(crate) fn assemble(spec: &ProblemSpec) -> Result<Assembly, SolveError> {
    Assembly::new(
        spec,
        (0..spec.time_terms.len()).collect(),
        (0..spec.space_terms.len()).collect(),
    )
}

/// Solves the linear initial-boundary-value problem by implicit L1 marching.
///
/// The spec must validate cleanly; otherwise the violations come back as
/// [`SolveError::Inadmissible`].
pub fn solve_ibvp(spec: &ProblemSpec) -> Result<SolutionField, SolveError> {
    let time_order: Vec<usize> = (0..spec.time_terms.len()).collect();
    let space_order: Vec<usize> = (0..spec.space_terms.len()).collect();
    solve_ibvp_permuted(spec, &time_order, &space_order)
}

/// Same mathematics as [`solve_ibvp`] but with the given term-summation
/// orders, which perturbs only the floating-point rounding. Two assembly
/// orders must agree to rounding precision; the uniqueness check exploits
/// this.
pub fn solve_ibvp_permuted(
    spec: &ProblemSpec,
    time_order: &[usize],
    space_order: &[usize],
) -> Result<SolutionField, SolveError> {
    assert_eq!(time_order.len(), spec.time_terms.len(), "bad time permutation");
    assert_eq!(space_order.len(), spec.space_terms.len(), "bad space permutation");
    let assembly = Assembly::new(spec, time_order.to_vec(), space_order.to_vec())?;
    let mut field = SolutionField::constant(spec.grid, 0.0);
    assembly.seed(&mut field);
    for n in 1..=assembly.nt {
        assembly.sweep_level(&mut field, n, |i| assembly.forcing_at(i, n))?;
    }
    Ok(field)
}
