//! Dawson's integral D(x) = e^(-x²) ∫₀ˣ e^(t²) dt and the imaginary error
//! function erfi(x) = (2/√π) e^(x²) D(x).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// |x| beyond which the asymptotic series replaces the power series.
const SERIES_LIMIT: f64 = 7.0;
/// Largest |x| for which erfi is returned directly (e^(x²) stays finite).
pub const ERFI_MAX_ARG: f64 = 26.0;

/// ∫₀ˣ e^(t²) dt = Σ x^(2k+1) / (k! (2k+1)); every term has the sign of x,
/// so the sum loses no digits to cancellation.
fn exp_sq_integral_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x; // x^(2k+1) / k!
    let mut sum = x;
    for k in 1..400 {
        power *= x2 / k as f64;
        let term = power / (2 * k + 1) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// D(x) ~ 1/(2x) Σ (2k-1)!! / (2x²)^k, summed to the smallest term.
fn dawson_asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let next = term * (2 * k - 1) as f64 * inv;
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum / (2.0 * x)
}

pub fn dawson(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let value = if ax == 0.0 {
        0.0
    } else if ax <= SERIES_LIMIT {
        (-ax * ax).exp() * exp_sq_integral_series(ax)
    } else if ax.is_infinite() {
        0.0
    } else {
        dawson_asymptotic(ax)
    };
    value.copysign(x)
}

/// D'(x) = 1 - 2x D(x).
pub fn dawson_prime(x: f64) -> f64 {
    1.0 - 2.0 * x * dawson(x)
}

pub fn erfi(x: f64) -> Result<f64> {
    if x.abs() > ERFI_MAX_ARG || x.is_nan() {
        return Err(Error::OutOfRange { what: "erfi (use ln_erfi)", value: x, min: -ERFI_MAX_ARG, max: ERFI_MAX_ARG });
    }
    Ok(2.0 / PI.sqrt() * (x * x).exp() * dawson(x))
}

/// ln erfi(x) for x > 0, valid where erfi itself overflows.
pub fn ln_erfi(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter { name: "x", value: x, reason: "ln_erfi needs finite x > 0" });
    }
    Ok((2.0 / PI.sqrt()).ln() + x * x + dawson(x).ln())
}
