//! Vertical fall with quadratic drag, dx/dt = v, dv/dt = -g + (alpha/m) v².
//!
//! The drag law is applied literally for every sign of v, so upward motion is
//! accelerated rather than damped. Every Hamiltonian built on top of this
//! module assumes the same literal equation.
//!
//! Two constants of motion exist for the same flow. The `Log` formulation
//! carries K1 = -(m²g/2α) ln(1 - αv²/mg) + mgx, defined only below the
//! terminal speed; the `Exp` formulation carries
//! K2 = (m²g/2α)(1 - e^(-2αx/m)) + (mv²/2) e^(-2αx/m).

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::ode::{dopri5_capped, OdeSolution};

/// Relative margin below the terminal speed at which the log branch refuses.
pub const TERMINAL_MARGIN: f64 = 1e-12;
/// Below this value of alpha v²/(mg) the logarithm is replaced by its series.
const SERIES_THRESHOLD: f64 = 1e-8;
/// Minimum number of steps per run, so dense output stays accurate.
pub(crate) const DENSE_STEPS: f64 = 256.0;

/// Mass, gravitational acceleration and drag coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    pub m: f64,
    pub g: f64,
    pub alpha: f64,
}

impl MediumParams {
    pub fn new(m: f64, g: f64, alpha: f64) -> Result<Self> {
        let p = Self { m, g, alpha };
        p.validate()?;
        Ok(p)
    }

    /// m = g = 1 with the given drag coefficient.
    pub fn natural(alpha: f64) -> Result<Self> {
        Self::new(1.0, 1.0, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("m", self.m)?;
        require_positive("g", self.g)?;
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: self.alpha,
                reason: "must be finite and >= 0",
            });
        }
        Ok(())
    }

    pub fn is_frictionless(&self) -> bool {
        self.alpha == 0.0
    }

    /// sqrt(mg/alpha); infinite when alpha = 0.
    pub fn terminal_speed(&self) -> f64 {
        if self.is_frictionless() {
            f64::INFINITY
        } else {
            (self.m * self.g / self.alpha).sqrt()
        }
    }

    /// m²g/(2 alpha), the energy scale shared by both constants of motion.
    pub(crate) fn energy_scale(&self) -> f64 {
        self.m * self.m * self.g / (2.0 * self.alpha)
    }

    /// alpha v²/(mg) = (v/v_T)².
    pub(crate) fn drag_ratio(&self, v: f64) -> f64 {
        self.alpha * v * v / (self.m * self.g)
    }

    /// Errors when |v| is within the guard margin of the terminal speed.
    pub fn check_log_domain(&self, v: f64) -> Result<()> {
        let vt = self.terminal_speed();
        if v.abs() >= vt * (1.0 - TERMINAL_MARGIN) {
            Err(Error::TerminalSpeed { speed: v.abs(), terminal: vt })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub x: f64,
    pub v: f64,
}

impl PhaseState {
    pub fn new(x: f64, v: f64) -> Self {
        Self { x, v }
    }
}

/// Selects which of the two constants of motion (and everything built from
/// it) is used. Columns and labels number `Log` as 1 and `Exp` as 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    Log,
    Exp,
}

impl Formulation {
    pub const ALL: [Formulation; 2] = [Formulation::Log, Formulation::Exp];

    pub fn label(self) -> &'static str {
        match self {
            Formulation::Log => "log",
            Formulation::Exp => "exp",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Formulation::Log => 1,
            Formulation::Exp => 2,
        }
    }
}

impl std::fmt::Display for Formulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: PhaseState,
}

/// Accepted integrator steps plus conservation diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: MediumParams,
    pub samples: Vec<TrajectorySample>,
    /// Max relative drift of K1; `None` if the run left the log domain.
    pub k1_drift: Option<f64>,
    pub k2_drift: f64,
    solution: OdeSolution<2>,
}

impl Trajectory {
    /// Dense-output state at time t (clamped to the integrated span).
    pub fn state_at(&self, t: f64) -> PhaseState {
        let [x, v] = self.solution.interpolate(t);
        PhaseState { x, v }
    }

    pub fn t_end(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    /// Larger of the two drifts, treating a skipped K1 check as zero.
    pub fn max_drift(&self) -> f64 {
        self.k1_drift.unwrap_or(0.0).max(self.k2_drift)
    }
}

pub fn rhs(state: &PhaseState, params: &MediumParams) -> (f64, f64) {
    (state.v, -params.g + params.alpha / params.m * state.v * state.v)
}

pub fn integrate(params: &MediumParams, initial: PhaseState, t_end: f64, tol: f64) -> Result<Trajectory> {
    params.validate()?;
    if !(t_end > 0.0) {
        return Err(Error::InvalidParameter { name: "t_end", value: t_end, reason: "must be > 0" });
    }
    let p = *params;
    let solution = dopri5_capped(
        |y: &[f64; 2]| {
            let (dx, dv) = rhs(&PhaseState::new(y[0], y[1]), &p);
            [dx, dv]
        },
        0.0,
        [initial.x, initial.v],
        t_end,
        tol,
        t_end / DENSE_STEPS,
    )?;
    let samples: Vec<TrajectorySample> = solution
        .t
        .iter()
        .zip(&solution.y)
        .map(|(&t, y)| TrajectorySample { t, state: PhaseState::new(y[0], y[1]) })
        .collect();

    let k1_drift = drift(Formulation::Log, params, &samples).ok();
    let k2_drift = drift(Formulation::Exp, params, &samples)?;
    Ok(Trajectory { params: p, samples, k1_drift, k2_drift, solution })
}

fn drift(form: Formulation, params: &MediumParams, samples: &[TrajectorySample]) -> Result<f64> {
    let k0 = constant_of_motion(form, params, &samples[0].state)?;
    let mut worst: f64 = 0.0;
    // Scale by |K0|, falling back to the kinetic+potential magnitude when K0 ~ 0.
    let s = &samples[0].state;
    let scale = k0.abs().max(0.5 * params.m * s.v * s.v + params.m * params.g * s.x.abs()).max(f64::MIN_POSITIVE);
    for sample in samples {
        let k = constant_of_motion(form, params, &sample.state)?;
        worst = worst.max((k - k0).abs() / scale);
    }
    Ok(worst)
}

/// Exact solution released from rest at x0.
pub fn analytic_drop(params: &MediumParams, x0: f64, t: f64) -> Result<PhaseState> {
    params.validate()?;
    if params.is_frictionless() {
        return Err(Error::Frictionless);
    }
    let vt = params.terminal_speed();
    let tau = params.g * t / vt;
    let v = -vt * tau.tanh();
    Ok(PhaseState::new(x0 - params.m / params.alpha * ln_cosh(tau), v))
}

/// ln cosh(q) without overflow or cancellation.
pub(crate) fn ln_cosh(q: f64) -> f64 {
    let a = q.abs();
    if a < 1.0 {
        let s = (0.5 * a).sinh();
        (2.0 * s * s).ln_1p()
    } else {
        a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
    }
}

/// -ln(1 - u) / u, accurate for small u.
fn neg_log1m_over_u(u: f64) -> f64 {
    if u < SERIES_THRESHOLD {
        1.0 + u / 2.0 + u * u / 3.0
    } else {
        -(-u).ln_1p() / u
    }
}

/// Characteristic curves: C1 in energy per unit mass, C2 dimensionless.
pub fn characteristic(form: Formulation, params: &MediumParams, state: &PhaseState) -> Result<f64> {
    params.validate()?;
    match form {
        Formulation::Log => {
            params.check_log_domain(state.v)?;
            let u = params.drag_ratio(state.v);
            Ok(0.5 * state.v * state.v * neg_log1m_over_u(u) + params.g * state.x)
        }
        Formulation::Exp => {
            let u = params.drag_ratio(state.v);
            Ok((1.0 - u) * (-2.0 * params.alpha * state.x / params.m).exp())
        }
    }
}

pub fn constant_of_motion(form: Formulation, params: &MediumParams, state: &PhaseState) -> Result<f64> {
    params.validate()?;
    let (m, g, x, v) = (params.m, params.g, state.x, state.v);
    if params.is_frictionless() {
        return Ok(0.5 * m * v * v + m * g * x);
    }
    match form {
        Formulation::Log => {
            params.check_log_domain(v)?;
            let u = params.drag_ratio(v);
            Ok(0.5 * m * v * v * neg_log1m_over_u(u) + m * g * x)
        }
        Formulation::Exp => {
            let a = 2.0 * params.alpha * x / m;
            Ok(params.energy_scale() * -(-a).exp_m1() + 0.5 * m * v * v * (-a).exp())
        }
    }
}
