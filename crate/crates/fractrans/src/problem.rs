//! Problem descriptions and admissibility validation.

use std::fmt;

use thiserror::Error;

use crate::exprlang::EvalError;
use crate::field::{CoefficientField, DataFn, FieldError};
use crate::grid::UniformGrid;

/// Strict positivity floor for the summed time coefficients. Enforcing
/// `sum p_i >= P_FLOOR` instead of `> 0` keeps every implicit diagonal
/// bounded away from zero.
pub const P_FLOOR: f64 = 1e-12;

/// A fractional differentiation order in the half-open interval `(0, 1]`.
/// Order 1 is the conventional first derivative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

#[derive(Debug, Clone, Error, PartialEq)]
#[error("fractional order must lie in (0, 1], got {0}")]
pub struct OrderError(f64);

impl FractionalOrder {
    pub fn new(value: f64) -> Result<Self, OrderError> {
        if value.is_finite() && value > 0.0 && value <= 1.0 {
            Ok(FractionalOrder(value))
        } else {
            Err(OrderError(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True exactly at order 1, where the Caputo derivative degenerates to
    /// the classical derivative.
    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which side of the equation a term or datum belongs to, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermSide {
    Time,
    Space,
}

impl fmt::Display for TermSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermSide::Time => write!(f, "time"),
            TermSide::Space => write!(f, "space"),
        }
    }
}

/// One violated admissibility condition, with the first offending node.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Differentiation orders within a term list must strictly increase.
    OrdersNotIncreasing { side: TermSide, index: usize },
    /// A derivative coefficient must be non-negative everywhere.
    NegativeCoefficient {
        side: TermSide,
        index: usize,
        node: (usize, usize),
        x: f64,
        t: f64,
        value: f64,
    },
    /// The summed time coefficients must stay above the positivity floor.
    VanishingTimeCoefficients {
        node: (usize, usize),
        x: f64,
        t: f64,
        sum: f64,
    },
    /// The reaction coefficient must be non-positive everywhere.
    PositiveReaction {
        node: (usize, usize),
        x: f64,
        t: f64,
        value: f64,
    },
    /// Initial and boundary data must agree at the corner within tolerance.
    IncompatibleData {
        initial_at_corner: f64,
        boundary_at_zero: f64,
        tolerance: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OrdersNotIncreasing { side, index } => write!(
                f,
                "admissibility: {side} orders must strictly increase, violated at position {index}"
            ),
            Violation::NegativeCoefficient { side, index, node, x, t, value } => write!(
                f,
                "admissibility: {side} coefficient #{index} must be non-negative; \
                 found {value} at node (i={}, n={}), x={x}, t={t}",
                node.0, node.1
            ),
            Violation::VanishingTimeCoefficients { node, x, t, sum } => write!(
                f,
                "admissibility: summed time coefficients must exceed {P_FLOOR}; \
                 found {sum} at node (i={}, n={}), x={x}, t={t}",
                node.0, node.1
            ),
            Violation::PositiveReaction { node, x, t, value } => write!(
                f,
                "admissibility: reaction coefficient must be non-positive; \
                 found {value} at node (i={}, n={}), x={x}, t={t}",
                node.0, node.1
            ),
            Violation::IncompatibleData { initial_at_corner, boundary_at_zero, tolerance } => {
                write!(
                    f,
                    "admissibility: initial and boundary data are incompatible at the corner: \
                     |a(x_min) - g(0)| = |{initial_at_corner} - {boundary_at_zero}| > {tolerance}"
                )
            }
        }
    }
}

/// Structural failures, distinct from admissibility violations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ValidationError {
    #[error("problem needs at least one time term and one space term (got {time_terms} and {space_terms})")]
    EmptyTermList { time_terms: usize, space_terms: usize },
    #[error("coefficient field for {side} term #{index} is malformed: {source}")]
    BadCoefficient {
        side: TermSide,
        index: usize,
        source: FieldError,
    },
    #[error("reaction field is malformed: {0}")]
    BadReaction(FieldError),
    #[error("forcing field is malformed: {0}")]
    BadForcing(FieldError),
    #[error("initial datum failed to evaluate: {0}")]
    BadInitial(EvalError),
    #[error("boundary datum failed to evaluate: {0}")]
    BadBoundary(EvalError),
    #[error("datum produced a non-finite value at {what}({arg})")]
    NonFiniteDatum { what: &'static str, arg: f64 },
}

/// Full description of one initial-boundary-value problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    /// `(alpha_i, p_i)` pairs; orders must strictly increase.
    pub time_terms: Vec<(FractionalOrder, CoefficientField)>,
    /// `(beta_j, q_j)` pairs; orders must strictly increase.
    pub space_terms: Vec<(FractionalOrder, CoefficientField)>,
    /// Reaction coefficient `r(x, t) <= 0`.
    pub reaction: CoefficientField,
    /// Source term `F(x, t)`.
    pub forcing: CoefficientField,
    /// Initial profile `a(x)`.
    pub initial: DataFn,
    /// Inflow boundary signal `g(t)`.
    pub boundary: DataFn,
    pub grid: UniformGrid,
    /// Corner-compatibility tolerance; `None` selects the default
    /// `1e-12 * max(1, |g(0)|)`.
    pub compat_tol: Option<f64>,
}

impl ProblemSpec {
    /// The same problem on a different resolution of the same domain.
    pub fn with_grid(&self, grid: UniformGrid) -> ProblemSpec {
        let mut spec = self.clone();
        spec.grid = grid;
        spec
    }

    pub fn compat_tolerance(&self, boundary_at_zero: f64) -> f64 {
        self.compat_tol
            .unwrap_or_else(|| 1e-12 * boundary_at_zero.abs().max(1.0))
    }

    /// A short stable identifier: a hash over the grid, the orders, and the
    /// sampled coefficient and data values.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        let g = &self.grid;
        for v in [g.x_min(), g.x_max(), g.t_final()] {
            hasher.update(v.to_bits().to_le_bytes());
        }
        hasher.update((g.nx() as u64).to_le_bytes());
        hasher.update((g.nt() as u64).to_le_bytes());
        let mut feed = |values: &[f64]| {
            for v in values {
                hasher.update(v.to_bits().to_le_bytes());
            }
        };
        for (order, coeff) in self.time_terms.iter().chain(self.space_terms.iter()) {
            feed(&[order.value()]);
            if let Ok(samples) = coeff.sample(g) {
                feed(&samples);
            }
        }
        for field in [&self.reaction, &self.forcing] {
            if let Ok(samples) = field.sample(g) {
                feed(&samples);
            }
        }
        for i in 0..=g.nx() {
            feed(&[self.initial.eval(g.x(i)).unwrap_or(f64::NAN)]);
        }
        for n in 0..=g.nt() {
            feed(&[self.boundary.eval(g.t(n)).unwrap_or(f64::NAN)]);
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Checks every admissibility condition by exhaustive node sampling.
///
/// Returns the list of violated conditions, each reported at its first
/// offending node (scanning time-major); the empty list means the spec is
/// admissible. Structural problems such as tabulated dimension mismatches
/// are reported as a hard error instead. Idempotent and side-effect free.
pub fn validate_problem(spec: &ProblemSpec) -> Result<Vec<Violation>, ValidationError> {
    let grid = &spec.grid;
    if spec.time_terms.is_empty() || spec.space_terms.is_empty() {
        return Err(ValidationError::EmptyTermList {
            time_terms: spec.time_terms.len(),
            space_terms: spec.space_terms.len(),
        });
    }

    let mut violations = Vec::new();

    for (side, terms) in [
        (TermSide::Time, &spec.time_terms),
        (TermSide::Space, &spec.space_terms),
    ] {
        for (idx, pair) in terms.windows(2).enumerate() {
            if pair[1].0.value() <= pair[0].0.value() {
                violations.push(Violation::OrdersNotIncreasing { side, index: idx + 1 });
                break;
            }
        }
    }

    // Sample the coefficient tables once; evaluation failures are structural.
    let mut p_tables = Vec::with_capacity(spec.time_terms.len());
    for (idx, (_, coeff)) in spec.time_terms.iter().enumerate() {
        p_tables.push(coeff.sample(grid).map_err(|source| {
            ValidationError::BadCoefficient { side: TermSide::Time, index: idx, source }
        })?);
    }
    let mut q_tables = Vec::with_capacity(spec.space_terms.len());
    for (idx, (_, coeff)) in spec.space_terms.iter().enumerate() {
        q_tables.push(coeff.sample(grid).map_err(|source| {
            ValidationError::BadCoefficient { side: TermSide::Space, index: idx, source }
        })?);
    }
    let r_table = spec.reaction.sample(grid).map_err(ValidationError::BadReaction)?;
    spec.forcing.sample(grid).map_err(ValidationError::BadForcing)?;

    let node_of = |flat: usize| {
        let stride = grid.nx() + 1;
        (flat % stride, flat / stride)
    };

    for (side, tables) in [(TermSide::Time, &p_tables), (TermSide::Space, &q_tables)] {
        for (index, table) in tables.iter().enumerate() {
            if let Some(flat) = table.iter().position(|v| *v < 0.0) {
                let (i, n) = node_of(flat);
                violations.push(Violation::NegativeCoefficient {
                    side,
                    index,
                    node: (i, n),
                    x: grid.x(i),
                    t: grid.t(n),
                    value: table[flat],
                });
            }
        }
    }

    for flat in 0..grid.node_count() {
        let sum: f64 = p_tables.iter().map(|t| t[flat]).sum();
        if sum < P_FLOOR {
            let (i, n) = node_of(flat);
            violations.push(Violation::VanishingTimeCoefficients {
                node: (i, n),
                x: grid.x(i),
                t: grid.t(n),
                sum,
            });
            break;
        }
    }

    if let Some(flat) = r_table.iter().position(|v| *v > 0.0) {
        let (i, n) = node_of(flat);
        violations.push(Violation::PositiveReaction {
            node: (i, n),
            x: grid.x(i),
            t: grid.t(n),
            value: r_table[flat],
        });
    }

    let a0 = spec
        .initial
        .eval(grid.x_min())
        .map_err(ValidationError::BadInitial)?;
    let g0 = spec
        .boundary
        .eval(0.0)
        .map_err(ValidationError::BadBoundary)?;
    for (what, v, arg) in [("a", a0, grid.x_min()), ("g", g0, 0.0)] {
        if !v.is_finite() {
            return Err(ValidationError::NonFiniteDatum { what, arg });
        }
    }
    let tol = spec.compat_tolerance(g0);
    if (a0 - g0).abs() > tol {
        violations.push(Violation::IncompatibleData {
            initial_at_corner: a0,
            boundary_at_zero: g0,
            tolerance: tol,
        });
    }

    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn base_spec() -> ProblemSpec {
        ProblemSpec {
            time_terms: vec![(
                FractionalOrder::new(0.5).unwrap(),
                CoefficientField::Constant(1.0),
            )],
            space_terms: vec![(
                FractionalOrder::new(0.5).unwrap(),
                CoefficientField::Constant(1.0),
            )],
            reaction: CoefficientField::Constant(-1.0),
            forcing: CoefficientField::Constant(0.0),
            initial: DataFn::Constant(1.0),
            boundary: DataFn::Constant(1.0),
            grid: UniformGrid::new(0.0, 1.0, 1.0, 4, 4).unwrap(),
            compat_tol: None,
        }
    }

    #[test]
    fn order_bounds() {
        assert!(FractionalOrder::new(0.0).is_err());
        assert!(FractionalOrder::new(-0.5).is_err());
        assert!(FractionalOrder::new(1.0 + 1e-12).is_err());
        assert!(FractionalOrder::new(f64::NAN).is_err());
        assert!(FractionalOrder::new(1.0).unwrap().is_classical());
        assert!(!FractionalOrder::new(0.999).unwrap().is_classical());
    }

    #[test]
    fn admissible_spec_has_no_violations() {
        assert_eq!(validate_problem(&base_spec()).unwrap(), vec![]);
    }

    #[test]
    fn positive_reaction_is_flagged_at_first_node() {
        let mut spec = base_spec();
        spec.reaction = CoefficientField::Constant(0.5);
        let violations = validate_problem(&spec).unwrap();
        assert_eq!(violations.len(), 1);
        match &violations[0] {
            Violation::PositiveReaction { node, value, .. } => {
                assert_eq!(*node, (0, 0));
                assert_eq!(*value, 0.5);
            }
            other => panic!("unexpected violation {other:?}"),
        }
    }

    #[test]
    fn vanishing_time_coefficients_reported_once() {
        let mut spec = base_spec();
        spec.time_terms = vec![(
            FractionalOrder::new(0.5).unwrap(),
            CoefficientField::Constant(0.0),
        )];
        let violations = validate_problem(&spec).unwrap();
        assert_eq!(violations.len(), 1);
        assert!(matches!(
            violations[0],
            Violation::VanishingTimeCoefficients { node: (0, 0), .. }
        ));
    }

    #[test]
    fn non_increasing_orders_are_flagged() {
        let mut spec = base_spec();
        spec.time_terms = vec![
            (FractionalOrder::new(0.7).unwrap(), CoefficientField::Constant(1.0)),
            (FractionalOrder::new(0.7).unwrap(), CoefficientField::Constant(1.0)),
        ];
        let violations = validate_problem(&spec).unwrap();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::OrdersNotIncreasing { side: TermSide::Time, .. })));
    }

    #[test]
    fn incompatible_corner_data() {
        let mut spec = base_spec();
        spec.initial = DataFn::Constant(1.0);
        spec.boundary = DataFn::Constant(1.5);
        let violations = validate_problem(&spec).unwrap();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::IncompatibleData { .. })));
    }

    #[test]
    fn dimension_mismatch_is_structural_not_admissibility() {
        let mut spec = base_spec();
        spec.reaction = CoefficientField::Tabulated {
            values: Arc::new(vec![-1.0; 9]),
            nx: 2,
            nt: 2,
        };
        assert!(matches!(
            validate_problem(&spec),
            Err(ValidationError::BadReaction(FieldError::DimensionMismatch { .. }))
        ));
    }

    #[test]
    fn validation_is_idempotent() {
        let mut spec = base_spec();
        spec.reaction = CoefficientField::Constant(0.25);
        let first = validate_problem(&spec).unwrap();
        let second = validate_problem(&spec).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn fingerprints_distinguish_specs() {
        let spec = base_spec();
        let mut other = base_spec();
        other.forcing = CoefficientField::Constant(2.0);
        assert_eq!(spec.fingerprint(), base_spec().fingerprint());
        assert_ne!(spec.fingerprint(), other.fingerprint());
    }
}
