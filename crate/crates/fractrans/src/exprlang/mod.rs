//! A minimal arithmetic expression language over the variables `x` and `t`.
//!
//! Coefficient fields and data functions in config files are written in this
//! language. The identifier set is closed: the only variables are `x` and `t`
//! and the only functions are the fixed builtins below, so expressions can be
//! evaluated without any environment plumbing.
//!
//! Grammar (by binding strength): `^` (right associative), unary `-`/`+`,
//! `*` `/`, `+` `-`. Builtins: `sin`, `cos`, `exp`, `sqrt`, `abs`, `erfc`
//! (all unary) and `pow`, `min`, `max` (binary).

mod lexer;
mod parser;

pub use lexer::{tokenize, LexError, Token, TokenKind};
pub use parser::{parse, parse_str, ParseError};

use std::fmt;
use thiserror::Error;

/// The two admissible variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Builtin functions with fixed arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
    Erfc,
    Pow,
    Min,
    Max,
}

impl Func {
    pub fn arity(self) -> usize {
        match self {
            Func::Pow | Func::Min | Func::Max => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Erfc => "erfc",
            Func::Pow => "pow",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "erfc" => Func::Erfc,
            "pow" => Func::Pow,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }
}

/// Parsed expression tree. Finite and acyclic by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Const(f64),
    Variable(Var),
    Neg(Box<ExprAst>),
    Bin(BinOp, Box<ExprAst>, Box<ExprAst>),
    Call(Func, Vec<ExprAst>),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{func} domain error for argument {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("non-finite result in {context}")]
    NonFinite { context: &'static str },
}

impl ExprAst {
    /// Evaluates the expression at the point `(x, t)`.
    ///
    /// Division by zero and domain errors (such as the square root of a
    /// negative number) are reported as errors rather than silent NaNs, and
    /// any non-finite intermediate is likewise rejected.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64, EvalError> {
        match self {
            ExprAst::Const(c) => Ok(*c),
            ExprAst::Variable(Var::X) => Ok(x),
            ExprAst::Variable(Var::T) => Ok(t),
            ExprAst::Neg(inner) => Ok(-inner.eval(x, t)?),
            ExprAst::Bin(op, lhs, rhs) => {
                let a = lhs.eval(x, t)?;
                let b = rhs.eval(x, t)?;
                let v = match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        a / b
                    }
                    BinOp::Pow => checked_pow(a, b)?,
                };
                finite(v, "binary operation")
            }
            ExprAst::Call(func, args) => {
                debug_assert_eq!(args.len(), func.arity());
                let a = args[0].eval(x, t)?;
                let v = match func {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Abs => a.abs(),
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(EvalError::Domain { func: "sqrt", arg: a });
                        }
                        a.sqrt()
                    }
                    Func::Erfc => statrs::function::erf::erfc(a),
                    Func::Pow => checked_pow(a, args[1].eval(x, t)?)?,
                    Func::Min => a.min(args[1].eval(x, t)?),
                    Func::Max => a.max(args[1].eval(x, t)?),
                };
                finite(v, "function call")
            }
        }
    }

    /// True if the expression references the given variable anywhere.
    pub fn uses_var(&self, var: Var) -> bool {
        match self {
            ExprAst::Const(_) => false,
            ExprAst::Variable(v) => *v == var,
            ExprAst::Neg(inner) => inner.uses_var(var),
            ExprAst::Bin(_, a, b) => a.uses_var(var) || b.uses_var(var),
            ExprAst::Call(_, args) => args.iter().any(|a| a.uses_var(var)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ExprAst::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            ExprAst::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            ExprAst::Neg(_) => 3,
            ExprAst::Bin(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

fn checked_pow(base: f64, exponent: f64) -> Result<f64, EvalError> {
    if base < 0.0 && exponent.fract() != 0.0 {
        return Err(EvalError::Domain { func: "pow", arg: base });
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(EvalError::DivisionByZero);
    }
    Ok(base.powf(exponent))
}

fn finite(v: f64, context: &'static str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { context })
    }
}

/// Pretty-printer. Parenthesization follows the grammar so that the printed
/// form reparses to a structurally equal tree.
impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn needs_parens(child: &ExprAst, min_prec: u8) -> bool {
            child.precedence() < min_prec
        }
        fn write_child(
            f: &mut fmt::Formatter<'_>,
            child: &ExprAst,
            min_prec: u8,
        ) -> fmt::Result {
            if needs_parens(child, min_prec) {
                write!(f, "({child})")
            } else {
                write!(f, "{child}")
            }
        }
        match self {
            ExprAst::Const(c) => {
                if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                    // Negative literals only arise from programmatic
                    // construction; print as a negation so the output reparses.
                    write!(f, "(-{})", -*c)
                } else {
                    write!(f, "{c}")
                }
            }
            ExprAst::Variable(Var::X) => write!(f, "x"),
            ExprAst::Variable(Var::T) => write!(f, "t"),
            ExprAst::Neg(inner) => {
                write!(f, "-")?;
                // The operand of unary minus must bind at least as tightly as
                // unary minus itself; `^` binds tighter and stays bare.
                write_child(f, inner, 3)
            }
            ExprAst::Bin(op, lhs, rhs) => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Pow => ("^", 4),
                };
                match op {
                    // `^` is right associative: parenthesize a `^` left child.
                    BinOp::Pow => {
                        if matches!(lhs.as_ref(), ExprAst::Bin(BinOp::Pow, ..)) {
                            write!(f, "({lhs})")?;
                        } else {
                            write_child(f, lhs, prec)?;
                        }
                        write!(f, "{sym}")?;
                        write_child(f, rhs, prec)
                    }
                    // Left-associative operators: the right child must bind
                    // strictly tighter when it is at the same level.
                    _ => {
                        write_child(f, lhs, prec)?;
                        write!(f, "{sym}")?;
                        write_child(f, rhs, prec + 1)
                    }
                }
            }
            ExprAst::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(src: &str) -> ExprAst {
        parse_str(src).unwrap()
    }

    #[test]
    fn sin_times_exp_at_origin_is_zero() {
        assert_eq!(e("sin(x)*exp(-t)").eval(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_at_one_matches_series_exponential() {
        // Independent oracle: e by its Taylor series, then invert.
        let mut e_series = 0.0f64;
        let mut term = 1.0f64;
        for k in 1..=25 {
            e_series += term;
            term /= k as f64;
        }
        let expected = 1.0 / e_series;
        let got = e("exp(-x^2)").eval(1.0, 0.0).unwrap();
        assert!((got - expected).abs() < 1e-12, "got {got}");
        assert!((got - 0.36787944117144233).abs() < 1e-12);
    }

    #[test]
    fn paper_constant_magnitude() {
        // sqrt(2) * exp(-1/2), the slope bound of the Gaussian bump.
        let got = e("sqrt(2)*exp(-0.5)").eval(3.0, 7.0).unwrap();
        assert!((got - 0.8577638849607068).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(e("1/x").eval(0.0, 0.0), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn sqrt_of_negative_is_a_domain_error() {
        assert!(matches!(
            e("sqrt(x)").eval(-1.0, 0.0),
            Err(EvalError::Domain { func: "sqrt", .. })
        ));
    }

    #[test]
    fn fractional_power_of_negative_base_is_a_domain_error() {
        assert!(matches!(
            e("x^0.5").eval(-2.0, 0.0),
            Err(EvalError::Domain { func: "pow", .. })
        ));
    }

    #[test]
    fn overflow_is_reported_not_inf() {
        assert!(matches!(
            e("exp(x)").eval(1.0e4, 0.0),
            Err(EvalError::NonFinite { .. })
        ));
    }

    #[test]
    fn erfc_builtin_matches_known_value() {
        // erfc(0) = 1, erfc(large) -> 0.
        assert!((e("erfc(x)").eval(0.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(e("erfc(x)").eval(8.0, 0.0).unwrap() < 1e-28);
    }

    #[test]
    fn eval_is_pure() {
        let ast = e("min(x,t)*exp(-x*t)+x^t");
        let a = ast.eval(1.25, 0.75).unwrap();
        let b = ast.eval(1.25, 0.75).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
