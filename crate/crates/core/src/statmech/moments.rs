//! Moments of the exp-formulation vertical Boltzmann weight.
//!
//! With λ = βm²g/(2α), r = e^(-αh/m) and T = λ(1 - r²),
//!
//! ```text
//! A_k = ∫₀^T Y^k e^(-Y) (1 - Y/λ)^(-1/2) dY
//! ```
//!
//! The vertical partition factor is sqrt(2πm/β) A_0/(βmg), and the vertical
//! energy and heat capacity follow from A_1/A_0 and A_2/A_0.

use crate::error::{Error, Result};
use crate::specfun::{dawson, ln_gamma};

/// ln γ(n, T), the lower incomplete gamma function for integer n >= 1.
pub(crate) fn ln_lower_gamma_int(n: u32, t: f64) -> f64 {
    let nf = n as f64;
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if t < nf + 1.0 {
        // γ(n,T) = T^n e^(-T) Σ_i T^i / (n (n+1) ... (n+i))
        let mut term = 1.0 / nf;
        let mut sum = term;
        for i in 1..10_000 {
            term *= t / (nf + i as f64);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        nf * t.ln() - t + sum.ln()
    } else {
        // γ(n,T) = (n-1)! (1 - e^(-T) Σ_{i<n} T^i/i!); the subtracted sum is < 1/2 here.
        let lt = t.ln();
        let q: f64 = (0..n).map(|i| (-t + i as f64 * lt - ln_gamma(i as f64 + 1.0).unwrap_or(0.0)).exp()).sum();
        ln_gamma(nf).unwrap_or(0.0) + (-q).ln_1p()
    }
}

/// Convergence region of the binomial series: 1 - r² <= 1/2, or λ large.
pub(crate) fn use_series(lambda: f64, one_minus_r2: f64) -> bool {
    one_minus_r2 <= 0.5 || lambda >= 60.0
}

/// A_0, A_1, A_2 by the binomial series Σ_j a_j λ^(-j) γ(k+j+1, T),
/// a_j = C(2j, j)/4^j.
fn moments_series(lambda: f64, t: f64) -> Result<[f64; 3]> {
    let ll = lambda.ln();
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut a = 1.0;
        let mut sum = 0.0;
        let mut converged = false;
        for j in 0..20_000u32 {
            let n = k as u32 + j + 1;
            let term = a * (ln_lower_gamma_int(n, t) - j as f64 * ll).exp();
            sum += term;
            if j > 0 && term < 1e-17 * sum {
                converged = true;
                break;
            }
            a *= (2 * j + 1) as f64 / (2 * j + 2) as f64;
        }
        if !converged {
            return Err(Error::QuadratureNotConverged {
                value: sum,
                error: f64::NAN,
                context: "vertical moment series",
            });
        }
        *slot = sum;
    }
    Ok(out)
}

/// A_0, A_1, A_2 from Dawson's integral and integration by parts in
/// u = sqrt(1 - Y/λ); used where the series converges slowly.
fn moments_dawson(lambda: f64, r: f64, t: f64) -> [f64; 3] {
    let s1 = lambda.sqrt();
    let er = (-t).exp();
    // M0 = ∫_r^1 e^(-λ(1-u²)) du, I2 = ∫ u² (...), I4 = ∫ u⁴ (...)
    let m0 = (dawson(s1) - er * dawson(s1 * r)) / s1;
    let i2 = ((1.0 - r * er) - m0) / (2.0 * lambda);
    let i4 = ((1.0 - r.powi(3) * er) - 3.0 * i2) / (2.0 * lambda);
    let two_l = 2.0 * lambda;
    [two_l * m0, two_l * lambda * (m0 - i2), two_l * lambda * lambda * (m0 - 2.0 * i2 + i4)]
}

/// Moments for given λ and attenuation r = e^(-αh/m); `one_minus_r2` is
/// passed separately so callers can form it without cancellation.
pub(crate) fn vertical_moments(lambda: f64, r: f64, one_minus_r2: f64) -> Result<[f64; 3]> {
    let t = lambda * one_minus_r2;
    if use_series(lambda, one_minus_r2) {
        moments_series(lambda, t)
    } else {
        Ok(moments_dawson(lambda, r, t))
    }
}
