//! Heat-capacity sweep over inverse temperature with crossover detection.

use serde::{Deserialize, Serialize};

use super::oracle::{heat_capacity_oracle, internal_energy_oracle, log_partition_oracle};
use super::{thermo_point, EnsembleParams};
use crate::dynamics::Formulation;
use crate::error::{Error, Result};
use crate::specfun::QuadratureSpec;

/// Agreement required between closed forms and oracles at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepTolerances {
    /// Absolute, in ln Z.
    pub log_z_abs: f64,
    pub u_rel: f64,
    pub cv_rel: f64,
    /// Run the phase-space quadrature at every point (slower).
    pub quadrature: bool,
}

impl Default for SweepTolerances {
    fn default() -> Self {
        Self { log_z_abs: 1e-8, u_rel: 1e-6, cv_rel: 1e-5, quadrature: true }
    }
}

/// One grid point. Index 1 is the log formulation, 2 the exp formulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    pub log_z1: f64,
    pub log_z2: f64,
    pub u1: f64,
    pub u2: f64,
    pub cv1: f64,
    pub cv2: f64,
    /// cv2 - cv1.
    pub delta_cv: f64,
    pub abs_delta_cv: f64,
    /// |closed - quadrature| in ln Z; NaN when quadrature is skipped.
    pub dev_log_z1: f64,
    pub dev_log_z2: f64,
    /// Relative deviation from the finite-difference oracles.
    pub dev_u1: f64,
    pub dev_u2: f64,
    pub dev_cv1: f64,
    pub dev_cv2: f64,
    /// Some deviation exceeds its tolerance (or an oracle failed).
    pub oracle_flag: bool,
}

/// A sign change of cv2 - cv1 between two grid points, refined by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub beta_star: f64,
    /// cv2 > cv1 below beta_star.
    pub exp_above_below: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub template: EnsembleParams,
    pub rows: Vec<SweepRow>,
    pub crossovers: Vec<Crossover>,
    /// |ΔC_V| strictly increases over the last quarter of the grid.
    pub increasing_at_high_beta: bool,
    pub flagged_points: usize,
}

pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(Error::InvalidParameter {
            name: "beta grid",
            value: lo,
            reason: "need 0 < lo < hi and at least 2 points",
        });
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n).map(|i| if i == n - 1 { hi } else { (a + (b - a) * i as f64 / (n - 1) as f64).exp() }).collect())
}

/// 64 log-spaced points on [1, 1e4].
pub fn default_beta_grid() -> Vec<f64> {
    log_spaced(1.0, 1e4, 64).expect("static grid")
}

fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn delta_cv(ens: &EnsembleParams) -> Result<f64> {
    let c1 = thermo_point(Formulation::Log, ens)?.c_v;
    let c2 = thermo_point(Formulation::Exp, ens)?.c_v;
    Ok(c2 - c1)
}

fn evaluate_row(ens: &EnsembleParams, tol: &SweepTolerances) -> Result<SweepRow> {
    let log = thermo_point(Formulation::Log, ens)?;
    let exp = thermo_point(Formulation::Exp, ens)?;
    let spec = QuadratureSpec::default();
    let dev_z = |form, closed: f64| -> f64 {
        if tol.quadrature {
            log_partition_oracle(form, ens, &spec).map_or(f64::INFINITY, |o| (closed - o).abs())
        } else {
            f64::NAN
        }
    };
    let dev_u = |form, closed: f64| internal_energy_oracle(form, ens).map_or(f64::INFINITY, |o| rel_dev(closed, o));
    let dev_c = |form, closed: f64| heat_capacity_oracle(form, ens).map_or(f64::INFINITY, |o| rel_dev(closed, o));
    let dev_log_z1 = dev_z(Formulation::Log, log.log_z);
    let dev_log_z2 = dev_z(Formulation::Exp, exp.log_z);
    let dev_u1 = dev_u(Formulation::Log, log.u);
    let dev_u2 = dev_u(Formulation::Exp, exp.u);
    let dev_cv1 = dev_c(Formulation::Log, log.c_v);
    let dev_cv2 = dev_c(Formulation::Exp, exp.c_v);
    let z_bad = tol.quadrature && !(dev_log_z1 <= tol.log_z_abs && dev_log_z2 <= tol.log_z_abs);
    let oracle_flag = z_bad
        || !(dev_u1 <= tol.u_rel && dev_u2 <= tol.u_rel)
        || !(dev_cv1 <= tol.cv_rel && dev_cv2 <= tol.cv_rel)
        || !(log.c_v > 0.0 && exp.c_v > 0.0);
    Ok(SweepRow {
        beta: ens.beta,
        log_z1: log.log_z,
        log_z2: exp.log_z,
        u1: log.u,
        u2: exp.u,
        cv1: log.c_v,
        cv2: exp.c_v,
        delta_cv: exp.c_v - log.c_v,
        abs_delta_cv: (exp.c_v - log.c_v).abs(),
        dev_log_z1,
        dev_log_z2,
        dev_u1,
        dev_u2,
        dev_cv1,
        dev_cv2,
        oracle_flag,
    })
}

/// Bisection in ln β on a bracketing interval of cv2 - cv1.
fn refine(template: &EnsembleParams, lo: f64, hi: f64) -> Result<f64> {
    let f = |b: f64| delta_cv(&template.with_beta(b));
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let fa = f(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = f(mid.exp())?;
        if fm == 0.0 {
            return Ok(mid.exp());
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-13 {
            break;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

pub fn sweep_beta(template: &EnsembleParams, beta_grid: &[f64], tol: &SweepTolerances) -> Result<SweepTable> {
    template.validate()?;
    if beta_grid.len() < 2 || beta_grid.windows(2).any(|w| !(w[1] > w[0])) || !(beta_grid[0] > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta grid",
            value: beta_grid.first().copied().unwrap_or(f64::NAN),
            reason: "must be positive, strictly increasing, with at least 2 points",
        });
    }
    let rows = beta_grid.iter().map(|&b| evaluate_row(&template.with_beta(b), tol)).collect::<Result<Vec<_>>>()?;

    let mut crossovers = Vec::new();
    for w in rows.windows(2) {
        let (a, b) = (w[0].delta_cv, w[1].delta_cv);
        if a != 0.0 && b != 0.0 && (a > 0.0) != (b > 0.0) {
            crossovers.push(Crossover {
                beta_lo: w[0].beta,
                beta_hi: w[1].beta,
                beta_star: refine(template, w[0].beta, w[1].beta)?,
                exp_above_below: a > 0.0,
            });
        }
    }

    let tail = (rows.len() / 4).max(2);
    let increasing_at_high_beta = rows[rows.len() - tail..].windows(2).all(|w| w[1].abs_delta_cv > w[0].abs_delta_cv);
    let flagged_points = rows.iter().filter(|r| r.oracle_flag).count();
    Ok(SweepTable { template: *template, rows, crossovers, increasing_at_high_beta, flagged_points })
}
