//! Two-parameter Mittag-Leffler function on the real line.
//!
//! ```text
//! E_{alpha,beta}(z) = sum_{k>=0} z^k / Gamma(alpha k + beta)
//! ```
//!
//! `E_alpha(r t^alpha)` solves the linear fractional relaxation equation and
//! is the exact reference that the solvers are validated against.
//!
//! # Evaluation strategy and supported range
//!
//! Supported parameters: `0 < alpha <= 1`, `beta > 0`, real `z`.
//!
//! * The Taylor series is used wherever its largest term stays below
//!   [`SERIES_MAX_TERM`] (so cancellation cannot eat more than ~2 digits)
//!   and it converges within [`MAX_SERIES_TERMS`] terms. This covers all
//!   `|z|` up to a few units, every `z >= 0` until the value itself
//!   approaches the f64 overflow threshold, and more for larger `alpha`.
//! * For `beta = 1`, `alpha < 1` and `z` negative beyond the series regime,
//!   the completely monotone integral representation
//!   `E_alpha(-x) = (sin(pi alpha)/(pi alpha)) *
//!    int_0^inf exp(-(s x)^(1/alpha)) / (s^2 + 2 s cos(pi alpha) + 1) ds`
//!   is integrated numerically; this covers at least `z >= -50` for
//!   `alpha` in `[0.2, 1]` with relative accuracy ~1e-12.
//! * Everything else is an explicit range error, never a silently wrong
//!   value.

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::quad::{tanh_sinh, QuadratureError};

/// Cancellation guard: the series route is taken only while its largest
/// term stays below this bound, keeping the summation error near 1e-11
/// absolute. Beyond it the integral route takes over.
pub const SERIES_MAX_TERM: f64 = 100.0;

/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 400;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MlfError {
    #[error("alpha must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("beta must be positive, got {0}")]
    InvalidBeta(f64),
    #[error("E_{{{alpha},{beta}}}({z}) overflows f64")]
    Overflow { alpha: f64, beta: f64, z: f64 },
    #[error("series for E_{{{alpha},{beta}}}({z}) does not converge within {MAX_SERIES_TERMS} terms")]
    SeriesNotConverged { alpha: f64, beta: f64, z: f64 },
    #[error("E_{{{alpha},{beta}}}({z}) is outside the supported range: {reason}")]
    UnsupportedRange {
        alpha: f64,
        beta: f64,
        z: f64,
        reason: &'static str,
    },
    #[error("integral representation failed: {0}")]
    Quadrature(#[from] QuadratureError),
}

/// Evaluates `E_{alpha,beta}(z)`. See the module docs for the supported
/// range; unsupported input is an explicit error.
pub fn mittag_leffler(alpha: f64, beta: f64, z: f64) -> Result<f64, MlfError> {
    if !(alpha > 0.0 && alpha <= 1.0) || !alpha.is_finite() {
        return Err(MlfError::InvalidAlpha(alpha));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(MlfError::InvalidBeta(beta));
    }
    if z == 0.0 {
        return Ok(if beta == 1.0 {
            1.0
        } else {
            (-ln_gamma(beta)).exp()
        });
    }
    if alpha == 1.0 && beta == 1.0 {
        return if z > 709.0 {
            Err(MlfError::Overflow { alpha, beta, z })
        } else {
            Ok(z.exp())
        };
    }

    let profile = series_profile(alpha, beta, z);
    if z > 0.0 {
        if profile.max_ln_term > 709.0 {
            return Err(MlfError::Overflow { alpha, beta, z });
        }
        if !profile.converges {
            return Err(MlfError::SeriesNotConverged { alpha, beta, z });
        }
        return Ok(series(alpha, beta, z));
    }

    // Negative argument: series while cancellation stays harmless, the
    // integral representation otherwise.
    if profile.max_ln_term <= SERIES_MAX_TERM.ln() && profile.converges {
        return Ok(series(alpha, beta, z));
    }
    if beta == 1.0 && alpha < 1.0 {
        return negative_axis_integral(alpha, -z);
    }
    Err(MlfError::UnsupportedRange {
        alpha,
        beta,
        z,
        reason: "series would cancel catastrophically and the integral route needs beta = 1",
    })
}

struct SeriesProfile {
    max_ln_term: f64,
    converges: bool,
}

/// Scans `ln |term_k|` to predict the series hump height and whether the
/// tail is negligible within the term cap.
fn series_profile(alpha: f64, beta: f64, z: f64) -> SeriesProfile {
    let ln_az = z.abs().ln();
    let mut max_ln = f64::NEG_INFINITY;
    let mut last_ln = f64::NEG_INFINITY;
    for k in 0..=MAX_SERIES_TERMS {
        let ln_term = k as f64 * ln_az - ln_gamma(alpha * k as f64 + beta);
        max_ln = max_ln.max(ln_term);
        last_ln = ln_term;
    }
    SeriesProfile {
        max_ln_term: max_ln,
        converges: last_ln < max_ln.min(0.0) - 45.0,
    }
}

/// Kahan-compensated Taylor summation. Terms go through logs so large
/// intermediate powers cannot overflow.
fn series(alpha: f64, beta: f64, z: f64) -> f64 {
    let ln_az = z.abs().ln();
    let negative = z < 0.0;
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    let mut small_streak = 0;
    for k in 0..=MAX_SERIES_TERMS {
        let ln_term = k as f64 * ln_az - ln_gamma(alpha * k as f64 + beta);
        let mut term = ln_term.exp();
        if negative && k % 2 == 1 {
            term = -term;
        }
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        if term.abs() <= 1e-17 * sum.abs().max(1e-30) {
            small_streak += 1;
            if small_streak >= 3 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    sum
}

/// `E_alpha(-x)` for `x > 0`, `0 < alpha < 1`, via the spectral integral.
fn negative_axis_integral(alpha: f64, x: f64) -> Result<f64, MlfError> {
    let theta = alpha * std::f64::consts::PI;
    let (sin_t, cos_t) = theta.sin_cos();
    let exponent = 1.0 / alpha;
    let integrand = |s: f64| -> f64 {
        let decay = -(s * x).powf(exponent);
        let den = s * s + 2.0 * s * cos_t + 1.0;
        if decay < -745.0 {
            0.0
        } else {
            decay.exp() / den
        }
    };
    // Fixed dyadic panels; the integrand decays at least like exp(-(sx)) for
    // s past 1/x and the remaining tail is O(exp(-64)).
    let mut total = 0.0f64;
    let mut left = 0.0f64;
    for right in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0] {
        let part = tanh_sinh(|node| integrand(node.x), left, right, 1e-13)?;
        total += part;
        if part.abs() < 1e-17 * total.abs() && right >= 8.0 {
            break;
        }
        left = right;
    }
    Ok(sin_t / (std::f64::consts::PI * alpha) * total)
}

/// Exact solution `a0 * E_alpha(r t^alpha)` of the fractional relaxation
/// problem `D_t^alpha u = r u`, `u(0) = a0`, for `0 < alpha <= 1`.
pub fn ml_time_solution(alpha: f64, r: f64, a0: f64, t: f64) -> Result<f64, MlfError> {
    assert!(t >= 0.0, "time must be non-negative");
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(MlfError::InvalidAlpha(alpha));
    }
    if t == 0.0 {
        return Ok(a0);
    }
    Ok(a0 * mittag_leffler(alpha, 1.0, r * t.powf(alpha))?)
}

/// Exact steady profile `g0 * E_beta(lambda x^beta)` of the space-fractional
/// balance `q D_x^beta u = r u`, `u(0) = g0`, with `lambda = r / q`.
pub fn ml_space_solution(beta: f64, lambda: f64, g0: f64, x: f64) -> Result<f64, MlfError> {
    assert!(x >= 0.0, "position must be non-negative");
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(MlfError::InvalidAlpha(beta));
    }
    if x == 0.0 {
        return Ok(g0);
    }
    Ok(g0 * mittag_leffler(beta, 1.0, lambda * x.powf(beta))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::erf::erfc;

    /// Independent oracle: E_{1/2}(z) = exp(z^2) erfc(-z) for real z.
    fn half_order_reference(z: f64) -> f64 {
        (z * z).exp() * erfc(-z)
    }

    #[test]
    fn classical_case_is_the_exponential() {
        let e = mittag_leffler(1.0, 1.0, 1.0).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-12);
        assert!((e - 2.718281828459045).abs() < 1e-12);
    }

    #[test]
    fn half_order_at_minus_one_matches_erfc_identity() {
        let got = mittag_leffler(0.5, 1.0, -1.0).unwrap();
        let want = half_order_reference(-1.0);
        assert!((got - want).abs() < 1e-8, "got {got}, want {want}");
        assert!((got - 0.42758357615580705).abs() < 1e-8);
    }

    #[test]
    fn zero_argument_is_exactly_one() {
        for k in 1..=10 {
            let alpha = k as f64 / 10.0;
            assert_eq!(mittag_leffler(alpha, 1.0, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn erfc_identity_holds_across_both_routes() {
        // Sweeps through the series regime, the route switch, and deep
        // negative arguments handled by the integral representation.
        for &z in &[-0.25, -1.0, -2.0, -2.75, -3.0, -5.0, -8.0, -12.0, -20.0] {
            let got = mittag_leffler(0.5, 1.0, z).unwrap();
            let want = half_order_reference(z);
            assert!(
                ((got - want) / want).abs() < 1e-9,
                "z={z}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn deep_negative_arguments_for_various_alpha() {
        // The integral route must stay monotone and positive out to -50.
        for &alpha in &[0.2, 0.4, 0.6, 0.8, 0.95] {
            let mut prev = 1.0;
            for step in 1..=25 {
                let z = -2.0 * step as f64;
                let v = mittag_leffler(alpha, 1.0, z).unwrap();
                assert!(v > 0.0, "alpha={alpha}, z={z}: {v}");
                assert!(v < prev, "alpha={alpha}, z={z}: {v} !< {prev}");
                prev = v;
            }
        }
    }

    #[test]
    fn positive_axis_series() {
        // E_{0.5}(1) = e * erfc(-1) by the same identity; the reference is
        // only as accurate as the erfc routine (~1e-11).
        let got = mittag_leffler(0.5, 1.0, 1.0).unwrap();
        let want = half_order_reference(1.0);
        assert!(((got - want) / want).abs() < 1e-9);
        // Larger positive argument still fine for alpha = 1 via series path
        // with beta != 1: E_{1,2}(z) = (e^z - 1)/z.
        let got = mittag_leffler(1.0, 2.0, 3.0).unwrap();
        let want = (3.0f64.exp() - 1.0) / 3.0;
        assert!(((got - want) / want).abs() < 1e-12);
    }

    #[test]
    fn overflow_and_range_errors_are_explicit() {
        assert!(matches!(
            mittag_leffler(1.0, 1.0, 800.0),
            Err(MlfError::Overflow { .. })
        ));
        assert!(matches!(
            mittag_leffler(0.0, 1.0, 1.0),
            Err(MlfError::InvalidAlpha(_))
        ));
        assert!(matches!(
            mittag_leffler(1.5, 1.0, 1.0),
            Err(MlfError::InvalidAlpha(_))
        ));
        assert!(matches!(
            mittag_leffler(0.5, 0.0, 1.0),
            Err(MlfError::InvalidBeta(_))
        ));
        // beta != 1 deep on the negative axis has no stable route.
        assert!(matches!(
            mittag_leffler(0.3, 2.0, -30.0),
            Err(MlfError::UnsupportedRange { .. })
        ));
    }

    #[test]
    fn time_solution_examples() {
        let v = ml_time_solution(0.5, -1.0, 1.0, 1.0).unwrap();
        assert!((v - 0.42758357615580705).abs() < 1e-8);
        assert_eq!(ml_time_solution(0.7, -3.0, 2.5, 0.0).unwrap(), 2.5);
        let v = ml_time_solution(1.0, -1.0, 2.0, 1.0).unwrap();
        assert!((v - 0.7357588823428847).abs() < 1e-12, "2/e");
    }

    #[test]
    fn space_solution_examples() {
        let v = ml_space_solution(0.5, -1.0, 1.0, 1.0).unwrap();
        assert!((v - 0.42758357615580705).abs() < 1e-8);
        assert_eq!(ml_space_solution(0.5, -1.0, 3.0, 0.0).unwrap(), 3.0);
        let v = ml_space_solution(1.0, -1.0, 1.0, 2.0).unwrap();
        assert!((v - 0.1353352832366127).abs() < 1e-12, "exp(-2)");
    }

    #[test]
    fn relaxation_profile_is_non_increasing() {
        for &alpha in &[0.2, 0.5, 0.8, 1.0] {
            let mut prev = f64::INFINITY;
            for j in 0..=100 {
                let t = j as f64 * 0.02;
                let v = ml_time_solution(alpha, -1.0, 1.0, t).unwrap();
                assert!(v <= prev + 1e-12, "alpha={alpha}, t={t}");
                prev = v;
            }
        }
    }
}
