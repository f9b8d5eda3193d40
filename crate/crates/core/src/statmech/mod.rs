//! Canonical thermodynamics of a two-species gas in a box under gravity.
//!
//! N1 light particles (mass m1) move freely in the box; N2 heavy particles
//! (mass m2) feel the medium. Per axis the heavy-particle Hamiltonian is
//! (p²/2m2) e^(2αq/m2) transversally for both formulations, and vertically
//! either the log-cosh Hamiltonian (`Log`) or the exp Hamiltonian (`Exp`).
//! The box is [0, L]² × [0, height].
//!
//! Every closed form is assembled in the log domain from per-particle
//! factors. Each factor carries ln f, its energy -∂ln f/∂β, and its
//! dimensionless heat capacity β² ∂² ln f/∂β², so U and C_V come out of the
//! same bookkeeping as ln Z.
//!
//! Log vertical factor (momentum part):
//! sqrt(π m2³ g/α) Γ(s)/Γ(s + 1/2), s = β m2² g/(2α),
//! times the barometric factor (1 - e^(-β m2 g h))/(β m2 g).
//!
//! Exp vertical factor: sqrt(2π m2/β) (m2/α) ∫_r^1 e^(-λ(1-u²)) du with
//! λ = β m2² g/(2α) and r = e^(-α h/m2). In Dawson form the integral is
//! (1/s1)[D(s1) - e^(-λ(1-r²)) D(s1 r)], s1 = sqrt(λ); equivalently
//! sqrt(π/(2αβg)) e^(-λ) [erfi(s1) - erfi(s1 r)] after the Gaussian factor.

mod moments;
pub mod oracle;
pub mod sweep;

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::dynamics::Formulation;
use crate::error::{require_positive, Error, Result};
use crate::specfun::{dawson, digamma_diff_half, ln_gamma, ln_gamma_ratio_half, trigamma_diff_half};

pub use oracle::{
    exp_vertical_coordinate_integral, heat_capacity_oracle, internal_energy_oracle, log_momentum_integral,
    log_partition_oracle,
};
pub use sweep::{default_beta_grid, log_spaced, sweep_beta, Crossover, SweepRow, SweepTable, SweepTolerances};

/// Two-species ensemble. `l` is the transverse side of the box; `height`
/// its vertical extent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n1: u32,
    pub n2: u32,
    pub m1: f64,
    pub m2: f64,
    pub alpha: f64,
    pub g: f64,
    pub l: f64,
    pub height: f64,
    pub beta: f64,
    pub k_b: f64,
    pub h_planck: f64,
}

impl Default for EnsembleParams {
    /// alpha = 0.01, g = 1, m1/m2 = 0.1 with m2 = 1, one particle per species,
    /// unit box and unit constants, beta = 1.
    fn default() -> Self {
        Self {
            n1: 1,
            n2: 1,
            m1: 0.1,
            m2: 1.0,
            alpha: 0.01,
            g: 1.0,
            l: 1.0,
            height: 1.0,
            beta: 1.0,
            k_b: 1.0,
            h_planck: 1.0,
        }
    }
}

impl EnsembleParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("m1", self.m1),
            ("m2", self.m2),
            ("g", self.g),
            ("L", self.l),
            ("height", self.height),
            ("beta", self.beta),
            ("k_b", self.k_b),
            ("h_planck", self.h_planck),
        ] {
            require_positive(name, v)?;
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: self.alpha,
                reason: "must be finite and >= 0",
            });
        }
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::InvalidParameter {
                name: "n1/n2",
                value: self.n1.min(self.n2) as f64,
                reason: "particle counts must be >= 1",
            });
        }
        if !(self.m2 > self.m1) {
            return Err(Error::InvalidParameter {
                name: "m2",
                value: self.m2,
                reason: "the heavy species must be heavier than the light one",
            });
        }
        Ok(())
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        Self { beta, ..*self }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }

    /// s = λ = β m2² g/(2α), the shape parameter of both vertical factors.
    pub fn shape(&self) -> f64 {
        self.beta * self.m2 * self.m2 * self.g / (2.0 * self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Closed,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub beta: f64,
    pub log_z: f64,
    pub u: f64,
    pub c_v: f64,
    pub formulation: Formulation,
    pub source: Source,
}

/// ln f, -∂ln f/∂β and β² ∂² ln f/∂β² of one multiplicative factor.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Terms {
    pub ln: f64,
    pub u: f64,
    pub c: f64,
}

impl Add for Terms {
    type Output = Terms;
    fn add(self, o: Terms) -> Terms {
        Terms { ln: self.ln + o.ln, u: self.u + o.u, c: self.c + o.c }
    }
}

impl Mul<f64> for Terms {
    type Output = Terms;
    fn mul(self, k: f64) -> Terms {
        Terms { ln: self.ln * k, u: self.u * k, c: self.c * k }
    }
}

/// ∫ e^(-βp²/2m) dp = sqrt(2πm/β).
fn gaussian(m: f64, beta: f64) -> Terms {
    Terms { ln: 0.5 * (2.0 * PI * m / beta).ln(), u: 0.5 / beta, c: 0.5 }
}

fn constant(value: f64) -> Terms {
    Terms { ln: value.ln(), u: 0.0, c: 0.0 }
}

/// ∫₀^h e^(-βmgz) dz = (1 - e^(-x))/(βmg), x = βmgh.
fn barometric(m: f64, g: f64, h: f64, beta: f64) -> Terms {
    let x = beta * m * g * h;
    let ln = (-(-x).exp_m1()).ln() - (beta * m * g).ln();
    // u = (1 - x/(e^x - 1))/β, c = 1 - (x/2 / sinh(x/2))²
    let (u, c) = if x < 1e-2 {
        let x2 = x * x;
        let x4 = x2 * x2;
        ((x / 2.0 - x2 / 12.0 + x4 / 720.0 - x4 * x2 / 30240.0) / beta, x2 / 12.0 - x4 / 240.0 + x4 * x2 / 6048.0)
    } else {
        let ratio = 0.5 * x / (0.5 * x).sinh();
        ((1.0 - x / x.exp_m1()) / beta, 1.0 - ratio * ratio)
    };
    Terms { ln, u, c }
}

/// One transverse axis of a heavy particle: sqrt(2πm/β) (m/α)(1 - e^(-αL/m)).
fn heavy_transverse(ens: &EnsembleParams) -> Terms {
    let coord = if ens.alpha == 0.0 { ens.l } else { ens.m2 / ens.alpha * -(-ens.alpha * ens.l / ens.m2).exp_m1() };
    gaussian(ens.m2, ens.beta) + constant(coord)
}

fn light_particle(ens: &EnsembleParams) -> Terms {
    gaussian(ens.m1, ens.beta) * 3.0 + constant(ens.l * ens.l) + barometric(ens.m1, ens.g, ens.height, ens.beta)
}

/// Log-cosh vertical momentum factor relative to the Gaussian:
/// ln[sqrt(s) Γ(s)/Γ(s+1/2)] and its β-derivatives, s ∝ β.
fn log_sech_correction(ens: &EnsembleParams) -> Result<Terms> {
    if ens.alpha == 0.0 {
        return Ok(Terms::default());
    }
    let s = ens.shape();
    let beta = ens.beta;
    Ok(Terms {
        ln: ln_gamma_ratio_half(s)? + 0.5 * s.ln(),
        u: -(s / beta) * (digamma_diff_half(s)? + 0.5 / s),
        c: s * s * trigamma_diff_half(s)? - 0.5,
    })
}

fn heavy_vertical_log(ens: &EnsembleParams) -> Result<Terms> {
    Ok(gaussian(ens.m2, ens.beta) + log_sech_correction(ens)? + barometric(ens.m2, ens.g, ens.height, ens.beta))
}

/// 1 - r² = 1 - e^(-2αh/m2) without cancellation.
fn one_minus_r2(ens: &EnsembleParams) -> f64 {
    -(-2.0 * ens.alpha * ens.height / ens.m2).exp_m1()
}

fn heavy_vertical_exp(ens: &EnsembleParams) -> Result<Terms> {
    if ens.alpha == 0.0 {
        return Ok(gaussian(ens.m2, ens.beta) + barometric(ens.m2, ens.g, ens.height, ens.beta));
    }
    let lambda = ens.shape();
    let om = one_minus_r2(ens);
    let r = (-ens.alpha * ens.height / ens.m2).exp();
    let [a0, a1, a2] = moments::vertical_moments(lambda, r, om)?;
    if !(a0 > 0.0) {
        return Err(Error::NonPositiveFactor { value: a0, context: "exp vertical factor" });
    }
    let mean = a1 / a0;
    let beta = ens.beta;
    Ok(gaussian(ens.m2, beta)
        + Terms { ln: a0.ln() - (beta * ens.m2 * ens.g).ln(), u: mean / beta, c: a2 / a0 - mean * mean })
}

fn heavy_particle(form: Formulation, ens: &EnsembleParams) -> Result<Terms> {
    let vertical = match form {
        Formulation::Log => heavy_vertical_log(ens)?,
        Formulation::Exp => heavy_vertical_exp(ens)?,
    };
    Ok(heavy_transverse(ens) * 2.0 + vertical)
}

/// -ln N1! - ln N2! - 3N ln h.
pub(crate) fn combinatorial(ens: &EnsembleParams) -> Result<f64> {
    let n = (ens.n1 + ens.n2) as f64;
    Ok(-ln_gamma(ens.n1 as f64 + 1.0)? - ln_gamma(ens.n2 as f64 + 1.0)? - 3.0 * n * ens.h_planck.ln())
}

fn total(form: Formulation, ens: &EnsembleParams) -> Result<Terms> {
    ens.validate()?;
    let t = light_particle(ens) * ens.n1 as f64 + heavy_particle(form, ens)? * ens.n2 as f64;
    let out = Terms { ln: t.ln + combinatorial(ens)?, ..t };
    if !out.ln.is_finite() || !out.u.is_finite() || !out.c.is_finite() {
        return Err(Error::NonPositiveFactor { value: out.ln, context: "log partition function" });
    }
    Ok(out)
}

pub fn log_partition_closed(form: Formulation, ens: &EnsembleParams) -> Result<f64> {
    Ok(total(form, ens)?.ln)
}

/// U = -∂ ln Z/∂β.
pub fn internal_energy(form: Formulation, ens: &EnsembleParams) -> Result<f64> {
    Ok(total(form, ens)?.u)
}

/// C_V = k β² ∂² ln Z/∂β² = -k β² ∂U/∂β.
pub fn heat_capacity(form: Formulation, ens: &EnsembleParams) -> Result<f64> {
    Ok(ens.k_b * total(form, ens)?.c)
}

pub fn thermo_point(form: Formulation, ens: &EnsembleParams) -> Result<ThermoPoint> {
    let t = total(form, ens)?;
    Ok(ThermoPoint {
        beta: ens.beta,
        log_z: t.ln,
        u: t.u,
        c_v: ens.k_b * t.c,
        formulation: form,
        source: Source::Closed,
    })
}

/// Exp vertical factor evaluated through the erfi-bracket structure
/// f(β) = erfi(s1) - erfi(s1 r): U_v = (1 + λ)/β - f'/f and
/// C_v/k = 1 + β² (f''/f - (f'/f)²), with every erfi scaled by e^(-λ).
/// Mathematically equal to the moment form; kept to quantify the
/// cancellation in f''/f - (f'/f)² at large β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErfiBracket {
    /// e^(-λ) f(β).
    pub f_scaled: f64,
    /// f'/f.
    pub dlog_f: f64,
    /// f''/f.
    pub d2_over_f: f64,
    pub u_vertical: f64,
    pub c_vertical: f64,
}

pub fn exp_erfi_bracket(ens: &EnsembleParams) -> Result<ErfiBracket> {
    ens.validate()?;
    if ens.alpha == 0.0 {
        return Err(Error::Frictionless);
    }
    let beta = ens.beta;
    let lambda = ens.shape();
    let s1 = lambda.sqrt();
    let r = (-ens.alpha * ens.height / ens.m2).exp();
    let er = (-lambda * one_minus_r2(ens)).exp();
    let c = 2.0 / PI.sqrt();
    let f = c * (dawson(s1) - er * dawson(s1 * r));
    // d erfi(x)/dβ = (2/√π) e^(x²) x/(2β) for x ∝ sqrt(β)
    let fp = c * s1 / (2.0 * beta) * (1.0 - r * er);
    let fpp = c * s1 / (4.0 * beta * beta) * ((2.0 * lambda - 1.0) - r * er * (2.0 * lambda * r * r - 1.0));
    let dlog_f = fp / f;
    let d2_over_f = fpp / f;
    Ok(ErfiBracket {
        f_scaled: f,
        dlog_f,
        d2_over_f,
        u_vertical: (1.0 + lambda) / beta - dlog_f,
        c_vertical: 1.0 + beta * beta * (d2_over_f - dlog_f * dlog_f),
    })
}

/// Vertical energy and heat capacity of one heavy particle (closed form).
pub fn heavy_vertical_thermo(form: Formulation, ens: &EnsembleParams) -> Result<(f64, f64)> {
    ens.validate()?;
    let t = match form {
        Formulation::Log => heavy_vertical_log(ens)?,
        Formulation::Exp => heavy_vertical_exp(ens)?,
    };
    Ok((t.u, t.c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn factorization_over_particles() {
        let one = EnsembleParams::default();
        let two = EnsembleParams { n1: 2, ..one };
        for form in Formulation::ALL {
            let z1 = log_partition_closed(form, &one).unwrap() - combinatorial(&one).unwrap();
            let light = light_particle(&one).ln;
            let z2 = log_partition_closed(form, &two).unwrap() - combinatorial(&two).unwrap();
            assert!((z2 - z1 - light).abs() < 1e-12);
        }
    }

    #[test]
    fn extensivity() {
        let a = EnsembleParams { n1: 3, n2: 2, ..Default::default() };
        let b = EnsembleParams { n1: 6, n2: 4, ..a };
        for form in Formulation::ALL {
            let za = log_partition_closed(form, &a).unwrap() - combinatorial(&a).unwrap();
            let zb = log_partition_closed(form, &b).unwrap() - combinatorial(&b).unwrap();
            assert!(rel(zb, 2.0 * za) < 1e-13);
        }
    }

    #[test]
    fn frictionless_limit() {
        let base = EnsembleParams { alpha: 0.0, beta: 2.0, ..Default::default() };
        let small = base.with_alpha(1e-8);
        for form in Formulation::ALL {
            let z0 = log_partition_closed(form, &base).unwrap();
            let z = log_partition_closed(form, &small).unwrap();
            assert!((z - z0).abs() < 1e-6, "{form}");
            assert!(rel(internal_energy(form, &small).unwrap(), internal_energy(form, &base).unwrap()) < 1e-6);
            assert!(rel(heat_capacity(form, &small).unwrap(), heat_capacity(form, &base).unwrap()) < 1e-6);
        }
        // hand-derived frictionless ln Z: ideal gas in gravity, two species
        let (b, g, h, l) = (2.0, 1.0, 1.0, 1.0);
        let per = |m: f64| {
            1.5 * (2.0 * PI * m / b).ln() + 2.0 * f64::ln(l) + ((1.0 - (-b * m * g * h).exp()) / (b * m * g)).ln()
        };
        let want = per(0.1) + per(1.0);
        assert!((log_partition_closed(Formulation::Log, &base).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn high_temperature_limits() {
        // Box-confined coordinates stop contributing as β → 0, so only momenta
        // count: ½ per Gaussian axis, and 1 for the log vertical momentum whose
        // energy grows like v_T |p| at large |p|.
        let want = [(Formulation::Log, 1.5 + 2.0), (Formulation::Exp, 1.5 + 1.5)];
        for (form, limit) in want {
            let hot = EnsembleParams { beta: 1e-7, ..Default::default() };
            let u = internal_energy(form, &hot).unwrap();
            assert!(rel(u * hot.beta, limit) < 1e-4, "{form}: {}", u * hot.beta);
            assert!(rel(heat_capacity(form, &hot).unwrap(), limit) < 1e-4);
            // U ∝ 1/β: log-log slope -1
            let u2 = internal_energy(form, &hot.with_beta(1e-6)).unwrap();
            let slope = (u2 / u).ln() / 10f64.ln();
            assert!((slope + 1.0).abs() < 1e-3, "{form}: slope {slope}");
        }
    }

    #[test]
    fn barometric_series_meets_closed_form() {
        let below = barometric(1.0, 1.0, 1.0, 1e-2 * (1.0 - 1e-9));
        let above = barometric(1.0, 1.0, 1.0, 1e-2);
        assert!(rel(below.u, above.u) < 1e-9);
        // c itself moves by ~2e-9 relative across the 1e-9 step
        assert!(rel(below.c, above.c) < 1e-8, "{below:?} {above:?}");
    }

    #[test]
    fn erfi_bracket_matches_moments_at_moderate_beta() {
        for &beta in &[0.5, 1.0, 5.0] {
            let ens = EnsembleParams { beta, ..Default::default() };
            let eb = exp_erfi_bracket(&ens).unwrap();
            let (u, c) = heavy_vertical_thermo(Formulation::Exp, &ens).unwrap();
            assert!(rel(eb.u_vertical, u) < 1e-10, "β={beta}");
            assert!((eb.c_vertical - c).abs() < 1e-8, "β={beta}: {} vs {c}", eb.c_vertical);
        }
    }

    #[test]
    fn positive_heat_capacity() {
        for &beta in &[0.01, 1.0, 100.0, 1e4] {
            for &alpha in &[1e-4, 0.01, 0.3] {
                let ens = EnsembleParams { beta, alpha, ..Default::default() };
                for form in Formulation::ALL {
                    assert!(heat_capacity(form, &ens).unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert!(EnsembleParams { m1: 2.0, ..Default::default() }.validate().is_err());
        assert!(EnsembleParams { beta: 0.0, ..Default::default() }.validate().is_err());
        assert!(EnsembleParams { n2: 0, ..Default::default() }.validate().is_err());
    }
}
