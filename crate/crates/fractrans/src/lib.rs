//! Solvers and a numerical certification harness for the one-dimensional
//! multi-term space-time-fractional transport equation
//!
//! ```text
//! sum_i p_i(x,t) D_t^{alpha_i} u  +  sum_j q_j(x,t) D_x^{beta_j} u
//!     = r(x,t) u + F(x,t)          on (0, l) x (0, T),
//! ```
//!
//! with Caputo derivatives of orders in `(0, 1]`, data `u(x,0) = a(x)`,
//! `u(0,t) = g(t)`, non-negative coefficients `p_i`, `q_j`, and
//! non-positive reaction `r`. The implicit L1 discretization is monotone
//! (an M-matrix in every spatial sweep), so the continuous maximum,
//! comparison, and uniqueness principles hold exactly on the grid up to
//! rounding; the [`verify`] module turns each of them into a checkable
//! report.
//!
//! Module map:
//! * [`grid`], [`field`], [`problem`], [`report`] - shared domain types.
//! * [`exprlang`] - the expression language for coefficients and data.
//! * [`fracops`] - L1 Caputo kernels and the quadrature reference oracle.
//! * [`mlf`] - Mittag-Leffler evaluation (exact solver oracles).
//! * [`solver`] - implicit marching solvers (linear, semilinear, truncated
//!   Cauchy, multi-term fractional ODE).
//! * [`verify`] - principle checks, randomized admissible-problem fuzzing,
//!   and convergence studies.
//! * [`oracle`] - independent brute-force reference implementations.

pub mod exprlang;
pub mod field;
pub mod fracops;
pub mod grid;
pub mod mlf;
pub mod oracle;
pub mod problem;
mod quad;
pub mod report;
pub mod solver;
pub mod verify;

pub use field::{boundary_extrema, BoundaryExtrema, CoefficientField, DataFn, SolutionField};
pub use grid::UniformGrid;
pub use problem::{validate_problem, FractionalOrder, ProblemSpec, Violation};
pub use report::{NodeLocation, Principle, VerificationReport};
