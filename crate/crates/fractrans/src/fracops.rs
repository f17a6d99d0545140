//! Discrete Caputo differentiation kernels and a quadrature reference oracle.
//!
//! The Caputo derivative of order `0 < alpha < 1` of a function `f` on
//! `[0, t]` is
//!
//! ```text
//! D^alpha f(t) = (1 / Gamma(1 - alpha)) * int_0^t (t - s)^{-alpha} f'(s) ds,
//! ```
//!
//! interpreted as the ordinary derivative at `alpha = 1`. The L1 scheme
//! replaces `f` by its piecewise-linear interpolant on a uniform step,
//! which yields the convolution form
//!
//! ```text
//! D^alpha f(t_n) ~= step^{-alpha} * sum_{k=0}^{n-1} b_k (f_{n-k} - f_{n-k-1}),
//! b_k = ((k+1)^{1-alpha} - k^{1-alpha}) / Gamma(2 - alpha).
//! ```
//!
//! The weights are strictly positive and strictly decreasing, which is what
//! gives every implicit scheme built on them an M-matrix structure. The same
//! kernel serves the time derivative (step = tau) and the space derivative
//! (step = h), since the spatial Caputo derivative integrates from 0 to x in
//! exact analogy.

use statrs::function::gamma::ln_gamma;

use crate::problem::FractionalOrder;
use crate::quad::{tanh_sinh, TanhSinhNode};

pub use crate::quad::QuadratureError;

/// Precomputed L1 convolution weights for one order and step.
#[derive(Debug, Clone)]
pub struct L1Weights {
    order: FractionalOrder,
    step: f64,
    /// `step^{-alpha}` (1/step in the classical case).
    scale: f64,
    /// `b_0 .. b_{K-1}`; empty in the degenerate classical case.
    weights: Vec<f64>,
    degenerate: bool,
}

impl L1Weights {
    pub fn order(&self) -> FractionalOrder {
        self.order
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// True at order 1, where the operator degenerates to the two-point
    /// backward difference and the weight table is bypassed.
    pub fn is_backward_difference(&self) -> bool {
        self.degenerate
    }
}

/// Builds the L1 weight table `b_0 .. b_{count-1}` for `order` and `step`.
///
/// The difference `(k+1)^{1-alpha} - k^{1-alpha}` is evaluated through
/// `expm1`/`ln_1p` so it stays accurate for large `k`, and `Gamma(2-alpha)`
/// goes through the log-gamma function.
pub fn build_weights(order: FractionalOrder, step: f64, count: usize) -> L1Weights {
    assert!(step > 0.0 && step.is_finite(), "step must be positive, got {step}");
    assert!(count >= 1, "need at least one weight");
    let alpha = order.value();
    if order.is_classical() {
        return L1Weights {
            order,
            step,
            scale: 1.0 / step,
            weights: Vec::new(),
            degenerate: true,
        };
    }
    let inv_gamma = (-ln_gamma(2.0 - alpha)).exp();
    let sigma = 1.0 - alpha;
    let mut weights = Vec::with_capacity(count);
    weights.push(inv_gamma); // b_0 = 1 / Gamma(2 - alpha)
    for k in 1..count {
        let kf = k as f64;
        // (k+1)^sigma - k^sigma = k^sigma * expm1(sigma * ln(1 + 1/k))
        let diff = kf.powf(sigma) * (sigma * (1.0 / kf).ln_1p()).exp_m1();
        weights.push(diff * inv_gamma);
    }
    L1Weights {
        order,
        step,
        scale: step.powf(-alpha),
        weights,
        degenerate: false,
    }
}

/// L1 value of the Caputo derivative of the sampled function at index `n`.
///
/// `samples[j]` holds `f(j * step)`. Computed in differenced form, so a
/// constant sample array yields exactly zero. At order 1 this is the plain
/// backward difference `(f_n - f_{n-1}) / step`.
///
/// Panics if `n` is out of range or the weight table is too short.
pub fn caputo_l1_at(samples: &[f64], weights: &L1Weights, n: usize) -> f64 {
    assert!(
        n >= 1 && n < samples.len(),
        "index {n} out of range for {} samples",
        samples.len()
    );
    if weights.degenerate {
        return (samples[n] - samples[n - 1]) / weights.step;
    }
    assert!(weights.len() >= n, "weight table too short: {} < {n}", weights.len());
    let mut acc = 0.0;
    for k in 0..n {
        acc += weights.weights[k] * (samples[n - k] - samples[n - k - 1]);
    }
    weights.scale * acc
}

/// Reference value of the Caputo derivative by direct quadrature of the
/// defining integral, with `f'` approximated by fourth-order finite
/// differences. Requires `0 < alpha < 1` and a continuously differentiable
/// integrand. Used as an independent oracle in tests.
pub fn caputo_quad_oracle<F>(
    f: F,
    order: FractionalOrder,
    t: f64,
    tol: f64,
) -> Result<f64, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    let h = 7.4e-4 * t;
    let df = move |s: f64| fd_derivative(&f, s, t, h);
    caputo_quad_oracle_with_derivative(df, order, t, tol)
}

/// Same as [`caputo_quad_oracle`] but with the derivative of `f` supplied
/// analytically, which also admits integrable derivative singularities at
/// the origin (such as `f'(s) ~ s^{beta-1}`).
pub fn caputo_quad_oracle_with_derivative<D>(
    df: D,
    order: FractionalOrder,
    t: f64,
    tol: f64,
) -> Result<f64, QuadratureError>
where
    D: Fn(f64) -> f64,
{
    assert!(t > 0.0, "evaluation time must be positive");
    let alpha = order.value();
    assert!(
        alpha < 1.0,
        "the quadrature oracle covers 0 < alpha < 1 only; order 1 is the classical derivative"
    );

    // Substituting u = (t - s)^{1-alpha} absorbs the kernel singularity:
    //   D^alpha f(t) = (1 / Gamma(2-alpha)) * int_0^U f'(t - u^m) du,
    // with U = t^{1-alpha}, m = 1/(1-alpha). A final flip v = U - u moves the
    // remaining (potential) f' singularity to v = 0 where the node's
    // endpoint distance is exact.
    let sigma = 1.0 - alpha;
    let upper = t.powf(sigma);
    let m = 1.0 / sigma;
    let prefactor = (-ln_gamma(2.0 - alpha)).exp();

    let integrand = |node: TanhSinhNode| {
        let v = node.dist_a; // distance from v = 0
        // s = t * (1 - ((U - v)/U)^m), evaluated without cancellation.
        let s = -t * (m * (-v / upper).ln_1p()).exp_m1();
        let s = s.clamp(0.0, t);
        df(s)
    };
    let integral = tanh_sinh(integrand, 0.0, upper, tol)?;
    Ok(prefactor * integral)
}

/// Fourth-order finite-difference derivative on `[0, t]`, switching to
/// one-sided stencils near the interval ends.
fn fd_derivative<F: Fn(f64) -> f64>(f: &F, s: f64, t: f64, h: f64) -> f64 {
    if s >= 2.0 * h && s + 2.0 * h <= t {
        (f(s - 2.0 * h) - 8.0 * f(s - h) + 8.0 * f(s + h) - f(s + 2.0 * h)) / (12.0 * h)
    } else if s < 2.0 * h {
        (-25.0 * f(s) + 48.0 * f(s + h) - 36.0 * f(s + 2.0 * h) + 16.0 * f(s + 3.0 * h)
            - 3.0 * f(s + 4.0 * h))
            / (12.0 * h)
    } else {
        (25.0 * f(s) - 48.0 * f(s - h) + 36.0 * f(s - 2.0 * h) - 16.0 * f(s - 3.0 * h)
            + 3.0 * f(s - 4.0 * h))
            / (12.0 * h)
    }
}
