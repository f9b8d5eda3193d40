//! Quantum bouncer above a hard floor and its first-order dissipative shifts.
//!
//! Positions are measured in units of the gravitational length
//! l_g = (ħ²/2m²g)^(1/3). The unperturbed states are ψ_n(z) = Ai(z - z_n)/|Ai'(-z_n)|
//! with energies m g l_g z_n, where -z_n is the n-th zero of Ai.
//!
//! The perturbations are the alpha-linear parts of the two Hamiltonians:
//! W_log = -alpha p⁴/(12 m⁴ g) and W_exp = alpha (x p²/m² - g x²).
//! First-order shifts are
//!
//! ```text
//! <W_log> = -alpha ħ⁴ z_n² / (60 g m⁴ l_g⁴) = -alpha g l_g² z_n² / 15
//! <W_exp> = alpha g l_g² (4 z_n²/15 - 8 z_n²/15) = -4 alpha g l_g² z_n² / 15
//! ```
//!
//! The x p² term alone gives +4/15; the -g x² term contributes -8/15 and is
//! what makes the total negative. [`w_correction_printed`] keeps the +4/15
//! value for comparison.

use serde::{Deserialize, Serialize};

use crate::dynamics::{Formulation, MediumParams};
use crate::error::{Error, Result};
use crate::specfun::{airy_pair, airy_zeros, integrate_piecewise, QuadratureSpec, MAX_AIRY_ZERO};

/// Quadrature extends this far beyond the classical turning point z_n.
pub const TAIL_LENGTH: f64 = 40.0;
/// Largest shift-to-spacing ratio still reported as first-order valid.
pub const FIRST_ORDER_LIMIT: f64 = 0.1;

/// Gravitational length scale, cached Airy zeros and the medium parameters.
#[derive(Debug, Clone)]
pub struct BouncerBasis {
    pub hbar: f64,
    pub params: MediumParams,
    pub l_g: f64,
    zeros: Vec<f64>,
    norms: Vec<f64>,
}

impl BouncerBasis {
    /// Caches levels 1..=levels (at most 100).
    pub fn new(params: MediumParams, hbar: f64, levels: usize) -> Result<Self> {
        params.validate()?;
        crate::error::require_positive("hbar", hbar)?;
        if levels == 0 || levels > MAX_AIRY_ZERO {
            return Err(Error::OutOfRange {
                what: "bouncer levels",
                value: levels as f64,
                min: 1.0,
                max: MAX_AIRY_ZERO as f64,
            });
        }
        let l_g = (hbar * hbar / (2.0 * params.m * params.m * params.g)).cbrt();
        let zeros = airy_zeros(levels)?;
        let norms = zeros.iter().map(|&z| airy_pair(-z).map(|(_, d)| d.abs())).collect::<Result<Vec<_>>>()?;
        Ok(Self { hbar, params, l_g, zeros, norms })
    }

    /// ħ = m = g = 1, so l_g = 2^(-1/3).
    pub fn natural(alpha: f64, levels: usize) -> Result<Self> {
        Self::new(MediumParams::natural(alpha)?, 1.0, levels)
    }

    pub fn levels(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// z_n for 1 <= n <= levels.
    pub fn zero(&self, n: usize) -> Result<f64> {
        self.check_level(n)?;
        Ok(self.zeros[n - 1])
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.zeros.len() {
            Err(Error::OutOfRange { what: "bouncer level", value: n as f64, min: 1.0, max: self.zeros.len() as f64 })
        } else {
            Ok(())
        }
    }

    /// (ψ, ψ') at z; callers guarantee z >= 0 and a valid level.
    fn psi_pair(&self, n: usize, z: f64) -> Result<(f64, f64)> {
        let (ai, aip) = airy_pair(z - self.zeros[n - 1])?;
        let norm = self.norms[n - 1];
        Ok((ai / norm, aip / norm))
    }

    /// Breakpoints for integrals over the product of levels m and n: the
    /// floor, every node of either state, the outer turning point and the cutoff.
    fn breakpoints(&self, m: usize, n: usize) -> Vec<f64> {
        let top = self.zeros[m.max(n) - 1];
        let mut pts = vec![0.0];
        for &level in &[m, n] {
            let zl = self.zeros[level - 1];
            pts.extend(self.zeros[..level - 1].iter().map(|&zk| zl - zk));
            pts.push(zl);
        }
        pts.push(top + TAIL_LENGTH);
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        pts
    }
}

/// One level of the perturbed spectrum; shifts are keyed by formulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLine {
    pub n: usize,
    pub z_n: f64,
    pub e0: f64,
    pub de_log: f64,
    pub de_exp: f64,
    pub e_total_log: f64,
    pub e_total_exp: f64,
    /// (de_exp - de_log) / e0.
    pub splitting: f64,
    /// Distance to the nearest neighbouring unperturbed level.
    pub spacing: f64,
    /// max(|de_log|, |de_exp|) / spacing.
    pub shift_to_spacing: f64,
    /// shift_to_spacing is below [`FIRST_ORDER_LIMIT`].
    pub first_order_valid: bool,
}

/// Operators whose diagonal (or off-diagonal) elements are taken in the
/// dimensionless coordinate z. D is d/dz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    Z,
    Z2,
    D2,
    D4,
    /// z D² applied as written, ∫ ψ_m z ψ_n''.
    ZD2,
    /// -D z D, ∫ z ψ_m' ψ_n' with the sign of z D²; Hermitian by construction.
    DZD,
    /// ½(z D² + D² z), the symmetrised ordering.
    ZD2Symmetric,
}

impl Operator {
    pub const ALL: [Operator; 7] =
        [Operator::Z, Operator::Z2, Operator::D2, Operator::D4, Operator::ZD2, Operator::DZD, Operator::ZD2Symmetric];

    pub fn label(self) -> &'static str {
        match self {
            Operator::Z => "z",
            Operator::Z2 => "z^2",
            Operator::D2 => "d2",
            Operator::D4 => "d4",
            Operator::ZD2 => "z*d2",
            Operator::DZD => "-d*z*d",
            Operator::ZD2Symmetric => "sym(z*d2)",
        }
    }
}

pub fn eigenstate(basis: &BouncerBasis, n: usize, z: f64) -> Result<f64> {
    basis.check_level(n)?;
    if !(z >= 0.0) {
        return Err(Error::InvalidParameter { name: "z", value: z, reason: "the bouncer lives above the floor z = 0" });
    }
    Ok(basis.psi_pair(n, z)?.0)
}

pub fn e0(basis: &BouncerBasis, n: usize) -> Result<f64> {
    let p = &basis.params;
    Ok(p.m * p.g * basis.l_g * basis.zero(n)?)
}

/// Derivatives ψ, ψ', ψ'', ψ'''' of level n at z from Ai'' = u Ai.
fn psi_derivatives(basis: &BouncerBasis, n: usize, z: f64) -> Result<[f64; 4]> {
    let (f, fp) = basis.psi_pair(n, z)?;
    let u = z - basis.zeros[n - 1];
    Ok([f, fp, u * f, 2.0 * fp + u * u * f])
}

fn quadrature_spec() -> QuadratureSpec {
    QuadratureSpec { rel_tol: 1e-12, abs_tol: 1e-14, max_subdivisions: 4000 }
}

/// ∫₀^(z_max + 40) ψ_m Ô ψ_n dz with analytic derivatives.
pub fn matrix_element_between(basis: &BouncerBasis, m: usize, n: usize, op: Operator) -> Result<f64> {
    basis.check_level(m)?;
    basis.check_level(n)?;
    let failure = std::cell::RefCell::new(None);
    let integrand = |z: f64| -> f64 {
        let pair = psi_derivatives(basis, m, z).and_then(|a| psi_derivatives(basis, n, z).map(|b| (a, b)));
        let (a, b) = match pair {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                return f64::NAN;
            }
        };
        match op {
            Operator::Z => z * a[0] * b[0],
            Operator::Z2 => z * z * a[0] * b[0],
            Operator::D2 => a[0] * b[2],
            Operator::D4 => a[0] * b[3],
            Operator::ZD2 => z * a[0] * b[2],
            Operator::DZD => -z * a[1] * b[1],
            // ½(z D² + D² z) ψ_n = z ψ_n'' + ψ_n'
            Operator::ZD2Symmetric => a[0] * (z * b[2] + b[1]),
        }
    };
    let q = integrate_piecewise(integrand, &basis.breakpoints(m, n), &quadrature_spec());
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    q?.require_converged("bouncer matrix element")
}

pub fn matrix_element(basis: &BouncerBasis, n: usize, op: Operator) -> Result<f64> {
    matrix_element_between(basis, n, n, op)
}

/// ∫ ψ_m ψ_n dz; 1 on the diagonal, 0 otherwise.
pub fn overlap(basis: &BouncerBasis, m: usize, n: usize) -> Result<f64> {
    basis.check_level(m)?;
    basis.check_level(n)?;
    let q = integrate_piecewise(
        |z| {
            let a = basis.psi_pair(m, z).map_or(f64::NAN, |p| p.0);
            let b = basis.psi_pair(n, z).map_or(f64::NAN, |p| p.0);
            a * b
        },
        &basis.breakpoints(m, n),
        &quadrature_spec(),
    )?;
    q.require_converged("bouncer overlap")
}

/// ∫₀^∞ Ai(z - z_n)² dz, which equals Ai'(-z_n)².
pub fn airy_norm_integral(basis: &BouncerBasis, n: usize) -> Result<f64> {
    Ok(overlap(basis, n, n)? * basis.norms[n - 1].powi(2))
}

/// Closed-form first-order shift <n|W|n>.
pub fn w_correction(basis: &BouncerBasis, form: Formulation, n: usize) -> Result<f64> {
    let z = basis.zero(n)?;
    let p = &basis.params;
    Ok(match form {
        Formulation::Log => -p.alpha * basis.hbar.powi(4) * z * z / (60.0 * p.g * p.m.powi(4) * basis.l_g.powi(4)),
        Formulation::Exp => -4.0 * p.alpha * p.g * basis.l_g.powi(2) * z * z / 15.0,
    })
}

/// The log shift rewritten with ħ² = 2 m² g l_g³: -alpha g l_g² z_n² / 15.
pub fn w_log_reduced(basis: &BouncerBasis, n: usize) -> Result<f64> {
    let z = basis.zero(n)?;
    let p = &basis.params;
    Ok(-p.alpha * p.g * basis.l_g.powi(2) * z * z / 15.0)
}

/// Shift values as commonly printed. The log value is identical to
/// [`w_correction`]; the exp value +4 alpha g l_g² z_n²/15 keeps only the
/// x p² contribution and disagrees with the quadrature of the full operator.
pub fn w_correction_printed(basis: &BouncerBasis, form: Formulation, n: usize) -> Result<f64> {
    match form {
        Formulation::Log => w_correction(basis, form, n),
        Formulation::Exp => {
            let z = basis.zero(n)?;
            let p = &basis.params;
            Ok(4.0 * p.alpha * p.g * basis.l_g.powi(2) * z * z / 15.0)
        }
    }
}

/// Matrix element <m|W|n> assembled from quadratures, in energy units.
/// The x p² term of W_exp uses the symmetrised ordering.
pub fn w_matrix_element(basis: &BouncerBasis, form: Formulation, m: usize, n: usize) -> Result<f64> {
    let p = &basis.params;
    let (hbar, lg) = (basis.hbar, basis.l_g);
    match form {
        Formulation::Log => {
            // p⁴ = ħ⁴/l_g⁴ D⁴
            let d4 = matrix_element_between(basis, m, n, Operator::D4)?;
            Ok(-p.alpha * hbar.powi(4) / (12.0 * p.m.powi(4) * p.g * lg.powi(4)) * d4)
        }
        Formulation::Exp => {
            // x p² = -(ħ²/l_g) z D², x² = l_g² z²
            let zd2 = matrix_element_between(basis, m, n, Operator::ZD2Symmetric)?;
            let z2 = matrix_element_between(basis, m, n, Operator::Z2)?;
            Ok(p.alpha * (-(hbar * hbar / lg) * zd2 / (p.m * p.m) - p.g * lg * lg * z2))
        }
    }
}

/// Quadrature oracle for the diagonal shift.
pub fn w_oracle(basis: &BouncerBasis, form: Formulation, n: usize) -> Result<f64> {
    w_matrix_element(basis, form, n, n)
}

pub fn spectrum(basis: &BouncerBasis, n_max: usize) -> Result<Vec<SpectrumLine>> {
    basis.check_level(n_max)?;
    let energies: Vec<f64> = (1..=basis.levels()).map(|n| e0(basis, n)).collect::<Result<_>>()?;
    (1..=n_max)
        .map(|n| {
            let e = energies[n - 1];
            let de_log = w_correction(basis, Formulation::Log, n)?;
            let de_exp = w_correction(basis, Formulation::Exp, n)?;
            let above = energies.get(n).map(|&u| u - e);
            let below = (n > 1).then(|| e - energies[n - 2]);
            let spacing = match (above, below) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => f64::INFINITY,
            };
            let shift_to_spacing = de_log.abs().max(de_exp.abs()) / spacing;
            Ok(SpectrumLine {
                n,
                z_n: basis.zeros[n - 1],
                e0: e,
                de_log,
                de_exp,
                e_total_log: e + de_log,
                e_total_exp: e + de_exp,
                splitting: (de_exp - de_log) / e,
                spacing,
                shift_to_spacing,
                first_order_valid: shift_to_spacing < FIRST_ORDER_LIMIT,
            })
        })
        .collect()
}
