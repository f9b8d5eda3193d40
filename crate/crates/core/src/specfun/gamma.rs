//! log-Gamma, digamma and trigamma for positive real arguments, plus the
//! half-shifted differences lnΓ(s) - lnΓ(s + 1/2) and their derivatives,
//! which are summed from their own asymptotic series at large s instead of
//! being formed as a difference of two nearly equal numbers.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_2, B_4, ..., B_16.
const BERNOULLI_EVEN: [f64; 8] =
    [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0];

const ASYMPTOTIC_FROM: f64 = 10.0;
const HALF_SHIFT_ASYMPTOTIC_FROM: f64 = 20.0;

fn check_positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: what, value: x, reason: "argument must be finite and > 0" })
    }
}

fn stirling_ln_gamma(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    let mut pow = 1.0 / x;
    let mut series = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2.0 * (k + 1) as f64;
        series += b / (n * (n - 1.0)) * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    if x >= ASYMPTOTIC_FROM {
        return Ok(stirling_ln_gamma(x));
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let series = LANCZOS[1..].iter().enumerate().fold(LANCZOS[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64));
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln())
}

/// ψ(x) = d lnΓ / dx.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    let mut x = x;
    let mut acc = 0.0;
    while x < ASYMPTOTIC_FROM {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        series += b / (2.0 * (k + 1) as f64) * pow;
        pow *= inv2;
    }
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// ψ'(x) = d² lnΓ / dx² (the standard trigamma function).
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive("trigamma", x)?;
    let mut x = x;
    let mut acc = 0.0;
    while x < ASYMPTOTIC_FROM {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2 / x;
    let mut series = 0.0;
    for b in BERNOULLI_EVEN {
        series += b * pow;
        pow *= inv2;
    }
    Ok(acc + 1.0 / x + 0.5 * inv2 + series)
}

/// Coefficients c_n (odd n) of lnΓ(s) - lnΓ(s+1/2) + ln(s)/2 ~ Σ c_n s^(-n),
/// c_n = B_{n+1} (2 - 2^(-n)) / (n (n+1)).
fn half_shift_coefficients() -> impl Iterator<Item = (f64, f64)> {
    BERNOULLI_EVEN.iter().enumerate().map(|(k, b)| {
        let n = (2 * k + 1) as f64;
        (n, b * (2.0 - 2f64.powf(-n)) / (n * (n + 1.0)))
    })
}

/// lnΓ(s) - lnΓ(s + 1/2).
pub fn ln_gamma_ratio_half(s: f64) -> Result<f64> {
    check_positive("ln_gamma_ratio_half", s)?;
    if s < HALF_SHIFT_ASYMPTOTIC_FROM {
        return Ok(ln_gamma(s)? - ln_gamma(s + 0.5)?);
    }
    let tail: f64 = half_shift_coefficients().map(|(n, c)| c * s.powf(-n)).sum();
    Ok(-0.5 * s.ln() + tail)
}

/// ψ(s) - ψ(s + 1/2).
pub fn digamma_diff_half(s: f64) -> Result<f64> {
    check_positive("digamma_diff_half", s)?;
    if s < HALF_SHIFT_ASYMPTOTIC_FROM {
        return Ok(digamma(s)? - digamma(s + 0.5)?);
    }
    let tail: f64 = half_shift_coefficients().map(|(n, c)| -n * c * s.powf(-n - 1.0)).sum();
    Ok(-0.5 / s + tail)
}

/// ψ'(s) - ψ'(s + 1/2).
pub fn trigamma_diff_half(s: f64) -> Result<f64> {
    check_positive("trigamma_diff_half", s)?;
    if s < HALF_SHIFT_ASYMPTOTIC_FROM {
        return Ok(trigamma(s)? - trigamma(s + 0.5)?);
    }
    let tail: f64 = half_shift_coefficients().map(|(n, c)| n * (n + 1.0) * c * s.powf(-n - 2.0)).sum();
    Ok(0.5 / (s * s) + tail)
}
