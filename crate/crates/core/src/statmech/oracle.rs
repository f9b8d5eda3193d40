//! Independent numerical checks: direct phase-space quadrature of e^(-βH)
//! and finite differences of the closed forms.

use std::cell::RefCell;

use super::{combinatorial, internal_energy, log_partition_closed, EnsembleParams};
use crate::dynamics::{Formulation, MediumParams};
use crate::error::{Error, Result};
use crate::mechanics::{hamiltonian, CanonicalState};
use crate::specfun::{integrate_1d, integrate_piecewise, QuadratureSpec};

/// Relative step of the β finite differences.
pub const FD_STEP: f64 = 1e-3;

/// ∫ F(p) dp over the real line, with p rescaled by the thermal momentum.
fn momentum_integral<F: Fn(f64) -> f64>(f: F, sigma: f64, spec: &QuadratureSpec, context: &'static str) -> Result<f64> {
    let q = integrate_1d(|u| f(sigma * u), f64::NEG_INFINITY, f64::INFINITY, spec)?;
    Ok(sigma * q.require_converged(context)?)
}

/// Breakpoints on [0, extent] at multiples of the decay length `scale`.
fn decay_points(extent: f64, scale: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    for k in [1.0, 10.0, 40.0] {
        let p = k * scale;
        if p < extent {
            pts.push(p);
        }
    }
    pts.push(extent);
    pts
}

/// ∫∫ e^(-βH(q,p)) dp dq over q in [0, extent], inner integral by quadrature.
fn phase_space_integral<H>(
    h: H,
    extent: f64,
    decay: f64,
    sigma: f64,
    beta: f64,
    spec: &QuadratureSpec,
    context: &'static str,
) -> Result<f64>
where
    H: Fn(f64, f64) -> Result<f64>,
{
    let failure = RefCell::new(None::<Error>);
    let inner = |q: f64| -> f64 {
        let r = momentum_integral(
            |p| match h(q, p) {
                Ok(e) => (-beta * e).exp(),
                Err(err) => {
                    failure.borrow_mut().get_or_insert(err);
                    f64::NAN
                }
            },
            sigma,
            spec,
            context,
        );
        match r {
            Ok(v) => v,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                f64::NAN
            }
        }
    };
    let outer = integrate_piecewise(inner, &decay_points(extent, decay), spec);
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    outer?.require_converged(context)
}

/// ln Z by direct quadrature of each independent phase-space factor. The
/// heavy-particle factors integrate the Hamiltonians of [`crate::mechanics`].
pub fn log_partition_oracle(form: Formulation, ens: &EnsembleParams, spec: &QuadratureSpec) -> Result<f64> {
    ens.validate()?;
    spec.validate()?;
    let spec = *spec;
    let beta = ens.beta;

    // light particle: free momentum in 3 axes, free transverse, barometric vertical
    let (m1, g) = (ens.m1, ens.g);
    let p1 = momentum_integral(|p| (-beta * p * p / (2.0 * m1)).exp(), (m1 / beta).sqrt(), &spec, "light momentum")?;
    let side = integrate_1d(|_| 1.0, 0.0, ens.l, &spec)?.require_converged("light transverse")?;
    let vert =
        integrate_piecewise(|z| (-beta * m1 * g * z).exp(), &decay_points(ens.height, 1.0 / (beta * m1 * g)), &spec)?
            .require_converged("light vertical")?;
    let light = 3.0 * p1.ln() + 2.0 * side.ln() + vert.ln();

    // heavy particle
    let m2 = ens.m2;
    let medium = MediumParams::new(m2, ens.g, ens.alpha)?;
    let sigma = (m2 / beta).sqrt();
    let a = ens.alpha;
    let transverse = phase_space_integral(
        |q, p| Ok(p * p / (2.0 * m2) * (2.0 * a * q / m2).exp()),
        ens.l,
        f64::INFINITY,
        sigma,
        beta,
        &spec,
        "heavy transverse",
    )?;
    let vertical = phase_space_integral(
        |z, p| hamiltonian(form, &medium, &CanonicalState::new(z, p)),
        ens.height,
        1.0 / (beta * m2 * ens.g),
        sigma,
        beta,
        &spec,
        "heavy vertical",
    )?;
    let heavy = 2.0 * transverse.ln() + vertical.ln();

    Ok(ens.n1 as f64 * light + ens.n2 as f64 * heavy + combinatorial(ens)?)
}

/// ∫ e^(-β m v_T² ln cosh(p/(m v_T))) dp for the heavy particle (alpha > 0).
pub fn log_momentum_integral(ens: &EnsembleParams, spec: &QuadratureSpec) -> Result<f64> {
    ens.validate()?;
    if ens.alpha == 0.0 {
        return Err(Error::Frictionless);
    }
    let medium = MediumParams::new(ens.m2, ens.g, ens.alpha)?;
    let beta = ens.beta;
    // H(0, p) of the log formulation is exactly the kinetic part.
    momentum_integral(
        |p| {
            hamiltonian(Formulation::Log, &medium, &CanonicalState::new(0.0, p)).map_or(f64::NAN, |e| (-beta * e).exp())
        },
        (ens.m2 / beta).sqrt(),
        spec,
        "log momentum integral",
    )
}

/// ∫₀^height e^(-αz/m) e^(-λ(1 - e^(-2αz/m))) dz for the heavy particle.
pub fn exp_vertical_coordinate_integral(ens: &EnsembleParams, spec: &QuadratureSpec) -> Result<f64> {
    ens.validate()?;
    if ens.alpha == 0.0 {
        return Err(Error::Frictionless);
    }
    let (m, a) = (ens.m2, ens.alpha);
    let lambda = ens.shape();
    let q = integrate_piecewise(
        |z| (-a * z / m).exp() * (lambda * (-2.0 * a * z / m).exp_m1()).exp(),
        &decay_points(ens.height, 1.0 / (ens.beta * m * ens.g)),
        spec,
    )?;
    q.require_converged("exp vertical coordinate integral")
}

/// Five-point central difference of `f` at β with step FD_STEP·β.
fn five_point<F: Fn(f64) -> Result<f64>>(f: F, beta: f64) -> Result<f64> {
    let d = FD_STEP * beta;
    Ok((-f(beta + 2.0 * d)? + 8.0 * f(beta + d)? - 8.0 * f(beta - d)? + f(beta - 2.0 * d)?) / (12.0 * d))
}

/// -∂ ln Z/∂β by finite differences of the closed ln Z.
pub fn internal_energy_oracle(form: Formulation, ens: &EnsembleParams) -> Result<f64> {
    Ok(-five_point(|b| log_partition_closed(form, &ens.with_beta(b)), ens.beta)?)
}

/// -k β² ∂U/∂β by finite differences of the closed U.
pub fn heat_capacity_oracle(form: Formulation, ens: &EnsembleParams) -> Result<f64> {
    let du = five_point(|b| internal_energy(form, &ens.with_beta(b)), ens.beta)?;
    Ok(-ens.k_b * ens.beta * ens.beta * du)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{dawson, ln_gamma_ratio_half};
    use crate::statmech::heat_capacity;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn closed_matches_quadrature_single_point() {
        let ens = EnsembleParams { n1: 1, n2: 1, ..Default::default() };
        for form in Formulation::ALL {
            let c = log_partition_closed(form, &ens).unwrap();
            let o = log_partition_oracle(form, &ens, &spec()).unwrap();
            assert!((c - o).abs() < 1e-8 * c.abs().max(1.0), "{form}: {c} vs {o}");
        }
    }

    #[test]
    fn gaussian_limit() {
        let ens = EnsembleParams { alpha: 0.0, beta: 3.0, ..Default::default() };
        for form in Formulation::ALL {
            let c = log_partition_closed(form, &ens).unwrap();
            let o = log_partition_oracle(form, &ens, &spec()).unwrap();
            assert!((c - o).abs() < 1e-10);
        }
    }

    #[test]
    fn log_momentum_factor_has_inverted_printed_prefactor() {
        for &(alpha, beta) in &[(0.01, 1.0), (0.3, 0.2), (0.05, 40.0)] {
            let ens = EnsembleParams { alpha, beta, ..Default::default() };
            let s = ens.shape();
            let (m, g) = (ens.m2, ens.g);
            let closed = (PI * m.powi(3) * g / alpha).sqrt() * ln_gamma_ratio_half(s).unwrap().exp();
            let quad = log_momentum_integral(&ens, &spec()).unwrap();
            assert!((closed - quad).abs() < 1e-8 * quad);
            let printed = (PI * alpha / (m.powi(3) * g)).sqrt() * ln_gamma_ratio_half(s).unwrap().exp();
            assert!((printed - quad).abs() > 1e-3 * quad);
        }
    }

    #[test]
    fn exp_coordinate_integral_matches_dawson_form() {
        for &(alpha, beta) in &[(0.01, 1.0), (0.4, 0.3), (0.05, 20.0)] {
            let ens = EnsembleParams { alpha, beta, ..Default::default() };
            let lambda = ens.shape();
            let s1 = lambda.sqrt();
            let r = (-alpha * ens.height / ens.m2).exp();
            let t = lambda * (1.0 - r * r);
            let closed = ens.m2 / alpha / s1 * (dawson(s1) - (-t).exp() * dawson(s1 * r));
            let quad = exp_vertical_coordinate_integral(&ens, &spec()).unwrap();
            assert!((closed - quad).abs() < 1e-8 * quad, "{closed} vs {quad}");
        }
    }

    #[test]
    fn derivative_chain_at_figure_point() {
        let ens = EnsembleParams { beta: 1000.0, ..Default::default() };
        for form in Formulation::ALL {
            let u = internal_energy(form, &ens).unwrap();
            let uo = internal_energy_oracle(form, &ens).unwrap();
            assert!((u - uo).abs() < 1e-6 * u.abs(), "{form}: {u} vs {uo}");
            let c = heat_capacity(form, &ens).unwrap();
            let co = heat_capacity_oracle(form, &ens).unwrap();
            assert!((c - co).abs() < 1e-5 * c.abs(), "{form}: {c} vs {co}");
        }
    }
}
