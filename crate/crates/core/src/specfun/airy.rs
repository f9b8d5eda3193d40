//! Airy function Ai and its derivative on the real line, plus the zeros of Ai.
//!
//! For |x| >= 9 the classical asymptotic expansions are summed up to their
//! smallest term (truncation error below e^(-2ζ), ζ = 2|x|^(3/2)/3 >= 18).
//! Inside (-9, 9) the value is a Taylor expansion of the Airy ODE about the
//! nearest anchor of a 0.25-spaced table. The anchor at 0 is the Maclaurin
//! series; the table is filled by Taylor stepping from 0 towards -9 (the
//! oscillatory side, neutrally stable) and from the x = 9 asymptotic value
//! back towards 0 (the decaying side, stable in that direction).

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Smallest supported argument.
pub const AIRY_MIN_ARG: f64 = -100.0;
/// Largest supported argument; Ai(100) ~ 2.6e-291 is still a normal double.
pub const AIRY_MAX_ARG: f64 = 100.0;

/// Ai(0) = 3^(-2/3) / Γ(2/3).
pub const AI_ZERO: f64 = 0.355_028_053_887_817_239_26;
/// Ai'(0) = -3^(-1/3) / Γ(1/3).
pub const AI_PRIME_ZERO: f64 = -0.258_819_403_792_806_798_41;

const ASYMPTOTIC_FROM: f64 = 9.0;
const ANCHOR_STEP: f64 = 0.25;
const ANCHOR_COUNT: usize = 73; // -9.0 ..= 9.0

struct Anchors {
    ai: [f64; ANCHOR_COUNT],
    aip: [f64; ANCHOR_COUNT],
}

fn anchor_x(i: usize) -> f64 {
    -ASYMPTOTIC_FROM + ANCHOR_STEP * i as f64
}

fn anchors() -> &'static Anchors {
    static TABLE: OnceLock<Anchors> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut ai = [0.0; ANCHOR_COUNT];
        let mut aip = [0.0; ANCHOR_COUNT];
        let mid = ANCHOR_COUNT / 2;
        ai[mid] = AI_ZERO;
        aip[mid] = AI_PRIME_ZERO;
        for i in (0..mid).rev() {
            let (y, yp) = taylor_step(anchor_x(i + 1), ai[i + 1], aip[i + 1], -ANCHOR_STEP);
            ai[i] = y;
            aip[i] = yp;
        }
        let last = ANCHOR_COUNT - 1;
        let (y, yp) = asymptotic_positive(ASYMPTOTIC_FROM);
        ai[last] = y;
        aip[last] = yp;
        for i in (mid + 1..last).rev() {
            let (y, yp) = taylor_step(anchor_x(i + 1), ai[i + 1], aip[i + 1], -ANCHOR_STEP);
            ai[i] = y;
            aip[i] = yp;
        }
        Anchors { ai, aip }
    })
}

/// Advances (y, y') of a solution of y'' = x y from `x0` to `x0 + h` with
/// the Taylor series of the ODE: (k+2)(k+1) a_{k+2} = x0 a_k + a_{k-1}.
pub(crate) fn taylor_step(x0: f64, y0: f64, yp0: f64, h: f64) -> (f64, f64) {
    let mut a_prev2 = y0; // a_{k-2}
    let mut a_prev1 = yp0; // a_{k-1}
    let mut a_prev3 = 0.0; // a_{k-3}
    let mut y = y0 + yp0 * h;
    let mut yp = yp0;
    let mut hk = h; // h^(k-1)
    let scale = y0.abs().max((yp0 * h).abs());
    // a_{3j+2} vanishes identically when x0 = 0, so one small term is not enough.
    let mut small_run = 0;
    for k in 2..80 {
        let a_k = (x0 * a_prev2 + a_prev3) / (k as f64 * (k - 1) as f64);
        let d_term = k as f64 * a_k * hk;
        hk *= h;
        let term = a_k * hk;
        y += term;
        yp += d_term;
        a_prev3 = a_prev2;
        a_prev2 = a_prev1;
        a_prev1 = a_k;
        if term.abs() < 1e-18 * scale && d_term.abs() * h.abs() < 1e-18 * scale {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    (y, yp)
}

/// Coefficients (u_k, v_k) of the large-argument expansions.
fn uv_coefficients() -> &'static [(f64, f64)] {
    static COEFFS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = Vec::with_capacity(60);
        let mut u = 1.0;
        out.push((1.0, 1.0));
        for k in 1..60 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            out.push((u, v));
        }
        out
    })
}

/// Sums Σ_j (-1)^j c_{start + j·step} ζ^-(start + j·step), stopping at the
/// smallest term.
fn asymptotic_sum(zeta: f64, start: usize, step: usize, use_v: bool) -> f64 {
    let coeffs = uv_coefficients();
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = start;
    while k < coeffs.len() {
        let c = if use_v { coeffs[k].1 } else { coeffs[k].0 };
        let term = c * zeta.powi(-(k as i32));
        if term.abs() > last {
            break;
        }
        sum += sign * term;
        last = term.abs();
        if last < f64::EPSILON * 1e-3 * sum.abs() {
            break;
        }
        sign = -sign;
        k += step;
    }
    sum
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let quarter = x.powf(0.25);
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    let su = asymptotic_sum(zeta, 0, 1, false);
    let sv = asymptotic_sum(zeta, 0, 1, true);
    (pref / quarter * su, -pref * quarter * sv)
}

fn asymptotic_negative(x: f64) -> (f64, f64) {
    let t = -x;
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let theta = zeta - 0.25 * PI;
    let (s, c) = theta.sin_cos();
    let quarter = t.powf(0.25);
    let u_even = asymptotic_sum(zeta, 0, 2, false);
    let u_odd = asymptotic_sum(zeta, 1, 2, false);
    let v_even = asymptotic_sum(zeta, 0, 2, true);
    let v_odd = asymptotic_sum(zeta, 1, 2, true);
    let root_pi = PI.sqrt();
    let ai = (c * u_even + s * u_odd) / (root_pi * quarter);
    let aip = quarter * (s * v_even - c * v_odd) / root_pi;
    (ai, aip)
}

fn check_range(x: f64) -> Result<()> {
    if (AIRY_MIN_ARG..=AIRY_MAX_ARG).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange { what: "airy", value: x, min: AIRY_MIN_ARG, max: AIRY_MAX_ARG })
    }
}

/// Returns `(Ai(x), Ai'(x))`.
pub fn airy_pair(x: f64) -> Result<(f64, f64)> {
    check_range(x)?;
    if x >= ASYMPTOTIC_FROM {
        return Ok(asymptotic_positive(x));
    }
    if x <= -ASYMPTOTIC_FROM {
        return Ok(asymptotic_negative(x));
    }
    let table = anchors();
    let i = ((x + ASYMPTOTIC_FROM) / ANCHOR_STEP).round() as usize;
    let i = i.min(ANCHOR_COUNT - 1);
    let x0 = anchor_x(i);
    if x == x0 {
        return Ok((table.ai[i], table.aip[i]));
    }
    Ok(taylor_step(x0, table.ai[i], table.aip[i], x - x0))
}

pub fn airy_ai(x: f64) -> Result<f64> {
    airy_pair(x).map(|p| p.0)
}

pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy_pair(x).map(|p| p.1)
}

/// Largest supported zero index.
pub const MAX_AIRY_ZERO: usize = 100;

/// T(t) from the standard zero expansion z_n ≈ T(3π(4n-1)/8).
fn zero_estimate(n: usize) -> f64 {
    let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
    let t2 = t.powi(-2);
    t.powf(2.0 / 3.0) * (1.0 + 5.0 / 48.0 * t2 - 5.0 / 36.0 * t2 * t2 + 77_125.0 / 82_944.0 * t2 * t2 * t2)
}

/// The n-th positive number `z_n` with Ai(-z_n) = 0, n = 1, 2, ...
///
/// Safeguarded Newton iteration inside a bracket around the asymptotic
/// estimate; falls back to bisection whenever Newton leaves the bracket.
pub fn airy_zero(n: usize) -> Result<f64> {
    if n == 0 || n > MAX_AIRY_ZERO {
        return Err(Error::OutOfRange {
            what: "airy_zero index",
            value: n as f64,
            min: 1.0,
            max: MAX_AIRY_ZERO as f64,
        });
    }
    let seed = zero_estimate(n);
    let half_gap = 0.25 * (zero_estimate(n + 1) - seed);
    let f = |z: f64| airy_pair(-z).map(|(ai, aip)| (ai, -aip));

    let (mut lo, mut hi) = (seed - half_gap, seed + half_gap);
    let (mut f_lo, _) = f(lo)?;
    let (f_hi, _) = f(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootNotFound("airy zero not bracketed by asymptotic estimate"));
    }

    let mut z = seed;
    for _ in 0..100 {
        let (value, slope) = f(z)?;
        if value == 0.0 {
            return Ok(z);
        }
        if value.signum() == f_lo.signum() {
            lo = z;
            f_lo = value;
        } else {
            hi = z;
        }
        let mut next = z - value / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() <= 4.0 * f64::EPSILON * z.abs() {
            return Ok(next);
        }
        z = next;
    }
    Err(Error::RootNotFound("airy zero iteration did not settle"))
}

/// z_1..z_count in increasing order.
pub fn airy_zeros(count: usize) -> Result<Vec<f64>> {
    (1..=count).map(airy_zero).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from 40-digit evaluation (mpmath).
    const REFERENCE: &[(f64, f64, f64)] = &[
        (-30.0, -0.087968188456842162833, 1.2286206026374851347),
        (-20.0, -0.17640612707798468959, 0.8928628567364712384),
        (-9.5, 0.31910324771912820138, -0.108095318811871239),
        (-9.0, -0.022133721547341403674, -0.97566398092633159471),
        (-7.3, 0.33577037051514727697, -0.18009580448329365985),
        (-5.0, 0.35076100902411431979, 0.32719281855444313679),
        (-2.5, -0.11232506769296608919, 0.67885273426479436337),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (0.5, 0.23169360648083348977, -0.22491053266468389314),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (2.0, 0.034924130423274379135, -0.053090384433653631704),
        (2.6, 0.01328928252967148217, -0.02256131088610874455),
        (5.0, 0.00010834442813607441735, -0.000247413890868462476),
        (7.9, 6.2396400972839341797e-8, -1.7729958329430335231e-7),
        (9.0, 2.4711684308724898433e-9, -7.4806413896589464128e-9),
        (12.0, 1.393184688875360839e-13, -4.854736554985308463e-13),
        (20.0, 1.6916728686705403136e-27, -7.5863916257483549605e-27),
        (40.0, 6.3657426585529149096e-75, -4.0300179776006780423e-74),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, ai, aip) in REFERENCE {
            let (a, ap) = airy_pair(x).unwrap();
            // Absolute floor scaled to the local amplitude handles values near zeros.
            let amp = (x.abs().max(1.0)).powf(-0.25);
            let tol_ai = 1e-12 * ai.abs().max(if x < 0.0 { 1e-2 * amp } else { 0.0 });
            let tol_aip = 1e-12 * aip.abs().max(if x < 0.0 { 1e-2 * amp } else { 0.0 });
            assert!((a - ai).abs() <= tol_ai, "Ai({x}) = {a}, want {ai}");
            assert!((ap - aip).abs() <= tol_aip, "Ai'({x}) = {ap}, want {aip}");
        }
    }

    #[test]
    fn ai_at_origin_matches_gamma_identity() {
        let expected = 3f64.powf(-2.0 / 3.0) / crate::specfun::ln_gamma(2.0 / 3.0).unwrap().exp();
        assert!((airy_ai(0.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn ode_residual_by_finite_differences() {
        // Ai'' from a fourth-order difference of Ai', compared with x Ai.
        let h = 1e-3;
        let d = |t: f64| airy_ai_prime(t).unwrap();
        for i in 0..240 {
            let x = -29.5 + 0.2075 * i as f64;
            let second = (-d(x + 2.0 * h) + 8.0 * d(x + h) - 8.0 * d(x - h) + d(x - 2.0 * h)) / (12.0 * h);
            let residual = second - x * airy_ai(x).unwrap();
            let tol = 1e-10 * (x.abs() / 10.0).powi(3).max(1.0);
            assert!(residual.abs() < tol, "residual at {x}: {residual:e}");
        }
    }

    #[test]
    fn continuous_across_asymptotic_switch() {
        for &edge in &[-ASYMPTOTIC_FROM, ASYMPTOTIC_FROM] {
            let inner = edge - edge.signum() * 1e-9;
            let (a_in, ap_in) = airy_pair(inner).unwrap();
            let (a_out, ap_out) = airy_pair(edge).unwrap();
            let tol = 1e-12 * a_out.abs().max(ap_out.abs());
            assert!((a_in - a_out).abs() < tol + 2e-9 * ap_out.abs());
            assert!((ap_in - ap_out).abs() < tol + 2e-9 * (edge * a_out).abs());
        }
        // The anchor at -9 is produced by Taylor stepping from 0; compare it with
        // the independent asymptotic expansion.
        let stepped = anchors().ai[0];
        let (asym, _) = asymptotic_negative(-9.0);
        assert!((stepped - asym).abs() < 1e-14, "{stepped} vs {asym}");
    }

    #[test]
    fn decays_monotonically_on_positive_axis() {
        let mut prev = airy_ai(0.0).unwrap();
        for i in 1..200 {
            let next = airy_ai(0.1 * i as f64).unwrap();
            assert!(next < prev && next > 0.0);
            prev = next;
        }
    }

    #[test]
    fn zeros_reference_and_residual() {
        let known = [
            (1, 2.3381074104597670385),
            (2, 4.0879494441309706166),
            (3, 5.5205598280955510591),
            (10, 12.8287767528657572),
            (20, 20.53733290767756636),
            (50, 38.021008677255254433),
            (100, 60.455557274116698707),
        ];
        for (n, z) in known {
            let got = airy_zero(n).unwrap();
            assert!((got - z).abs() < 1e-12 * z, "z_{n} = {got}, want {z}");
        }
        let zeros = airy_zeros(30).unwrap();
        for (i, z) in zeros.iter().enumerate() {
            assert!(airy_ai(-z).unwrap().abs() < 1e-13, "residual at z_{}", i + 1);
        }
        assert!(zeros.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(airy_ai(-100.5).is_err());
        assert!(airy_ai(f64::NAN).is_err());
        assert!(airy_zero(0).is_err());
        assert!(airy_zero(101).is_err());
    }
}
