//! Lagrangians, momenta and Hamiltonians generated by the two constants of
//! motion, their first-order-in-alpha truncations, and the canonical flows.

use serde::{Deserialize, Serialize};

use crate::dynamics::{constant_of_motion, ln_cosh, Formulation, MediumParams, PhaseState};
use crate::error::{Error, Result};
use crate::ode::{dopri5_capped, OdeSolution};
use crate::specfun::{integrate_1d, QuadratureSpec};

/// Position and generalized momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalState {
    pub x: f64,
    pub p: f64,
}

impl CanonicalState {
    pub fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }
}

/// Below this w² = (v/v_T)² the log Lagrangian is summed as a series.
const LAGRANGIAN_SERIES_W2: f64 = 0.1;

fn exp_factor(params: &MediumParams, x: f64) -> f64 {
    2.0 * params.alpha * x / params.m
}

/// artanh(w) written as ½(ln1p(w) - ln1p(-w)), i.e. ½ ln((1+w)/(1-w)).
fn artanh(w: f64) -> f64 {
    0.5 * (w.ln_1p() - (-w).ln_1p())
}

pub fn lagrangian(form: Formulation, params: &MediumParams, state: &PhaseState) -> Result<f64> {
    params.validate()?;
    let (m, g, x, v) = (params.m, params.g, state.x, state.v);
    if params.is_frictionless() {
        return Ok(0.5 * m * v * v - m * g * x);
    }
    match form {
        Formulation::Log => {
            params.check_log_domain(v)?;
            let vt = params.terminal_speed();
            let w = v / vt;
            let w2 = w * w;
            let kinetic = if w2 < LAGRANGIAN_SERIES_W2 {
                // m v² Σ_k w^(2k-2) / (2k(2k-1))
                let mut sum = 0.0;
                let mut pow = 1.0;
                for k in 1..60 {
                    let kf = k as f64;
                    let term = pow / (2.0 * kf * (2.0 * kf - 1.0));
                    sum += term;
                    if term < 1e-17 * sum {
                        break;
                    }
                    pow *= w2;
                }
                m * v * v * sum
            } else {
                m * vt * vt * (w * artanh(w) + 0.5 * (-w2).ln_1p())
            };
            Ok(kinetic - m * g * x)
        }
        Formulation::Exp => {
            let a = exp_factor(params, x);
            Ok(params.energy_scale() * (-a).exp_m1() + 0.5 * m * v * v * (-a).exp())
        }
    }
}

/// p = ∂L/∂v.
pub fn momentum(form: Formulation, params: &MediumParams, state: &PhaseState) -> Result<f64> {
    params.validate()?;
    let (m, v) = (params.m, state.v);
    if params.is_frictionless() {
        return Ok(m * v);
    }
    match form {
        Formulation::Log => {
            params.check_log_domain(v)?;
            let vt = params.terminal_speed();
            Ok(m * vt * artanh(v / vt))
        }
        Formulation::Exp => Ok(m * v * (-exp_factor(params, state.x)).exp()),
    }
}

pub fn velocity_from_momentum(form: Formulation, params: &MediumParams, x: f64, p: f64) -> Result<f64> {
    params.validate()?;
    let m = params.m;
    if params.is_frictionless() {
        return Ok(p / m);
    }
    Ok(match form {
        Formulation::Log => {
            let vt = params.terminal_speed();
            vt * (p / (m * vt)).tanh()
        }
        Formulation::Exp => p / m * exp_factor(params, x).exp(),
    })
}

pub fn to_canonical(form: Formulation, params: &MediumParams, state: &PhaseState) -> Result<CanonicalState> {
    Ok(CanonicalState::new(state.x, momentum(form, params, state)?))
}

pub fn to_phase(form: Formulation, params: &MediumParams, state: &CanonicalState) -> Result<PhaseState> {
    Ok(PhaseState::new(state.x, velocity_from_momentum(form, params, state.x, state.p)?))
}

pub fn hamiltonian(form: Formulation, params: &MediumParams, state: &CanonicalState) -> Result<f64> {
    params.validate()?;
    let (m, g, x, p) = (params.m, params.g, state.x, state.p);
    if params.is_frictionless() {
        return Ok(p * p / (2.0 * m) + m * g * x);
    }
    Ok(match form {
        Formulation::Log => {
            let vt = params.terminal_speed();
            m * vt * vt * ln_cosh(p / (m * vt)) + m * g * x
        }
        Formulation::Exp => {
            let a = exp_factor(params, x);
            params.energy_scale() * -(-a).exp_m1() + p * p / (2.0 * m) * a.exp()
        }
    })
}

/// Hamiltonians truncated after the term linear in alpha.
pub fn hamiltonian_first_order(form: Formulation, params: &MediumParams, state: &CanonicalState) -> Result<f64> {
    params.validate()?;
    let (m, g, x, p, alpha) = (params.m, params.g, state.x, state.p, params.alpha);
    let free = p * p / (2.0 * m) + m * g * x;
    Ok(match form {
        Formulation::Log => free - alpha * p.powi(4) / (12.0 * m.powi(4) * g),
        Formulation::Exp => free + alpha * (x * p * p / (m * m) - g * x * x),
    })
}

/// (∂H/∂p, -∂H/∂x) from the closed-form partial derivatives.
pub fn hamilton_equations(form: Formulation, params: &MediumParams, state: &CanonicalState) -> Result<(f64, f64)> {
    params.validate()?;
    let (m, g, x, p, alpha) = (params.m, params.g, state.x, state.p, params.alpha);
    if params.is_frictionless() {
        return Ok((p / m, -m * g));
    }
    Ok(match form {
        Formulation::Log => {
            let vt = params.terminal_speed();
            (vt * (p / (m * vt)).tanh(), -m * g)
        }
        Formulation::Exp => {
            let a = exp_factor(params, x);
            let up = a.exp();
            (p / m * up, -(m * g * (-a).exp() + alpha * p * p * up / (m * m)))
        }
    })
}

/// Solution of Hamilton's equations with energy-drift diagnostic.
#[derive(Debug, Clone)]
pub struct CanonicalTrajectory {
    pub form: Formulation,
    pub params: MediumParams,
    pub times: Vec<f64>,
    pub states: Vec<CanonicalState>,
    /// Max |H(t) - H(0)| / |H(0)| over accepted steps.
    pub h_drift: f64,
    solution: OdeSolution<2>,
}

impl CanonicalTrajectory {
    pub fn state_at(&self, t: f64) -> CanonicalState {
        let [x, p] = self.solution.interpolate(t);
        CanonicalState::new(x, p)
    }

    /// Dense-output state mapped back to (x, v).
    pub fn phase_at(&self, t: f64) -> Result<PhaseState> {
        to_phase(self.form, &self.params, &self.state_at(t))
    }
}

pub fn integrate_canonical(
    form: Formulation,
    params: &MediumParams,
    initial: CanonicalState,
    t_end: f64,
    tol: f64,
) -> Result<CanonicalTrajectory> {
    params.validate()?;
    if !(t_end > 0.0) {
        return Err(Error::InvalidParameter { name: "t_end", value: t_end, reason: "must be > 0" });
    }
    let p = *params;
    let solution = dopri5_capped(
        |y: &[f64; 2]| {
            // hamilton_equations only fails on invalid params, checked above.
            let (dx, dp) =
                hamilton_equations(form, &p, &CanonicalState::new(y[0], y[1])).unwrap_or((f64::NAN, f64::NAN));
            [dx, dp]
        },
        0.0,
        [initial.x, initial.p],
        t_end,
        tol,
        t_end / crate::dynamics::DENSE_STEPS,
    )?;
    let states: Vec<CanonicalState> = solution.y.iter().map(|y| CanonicalState::new(y[0], y[1])).collect();
    let h0 = hamiltonian(form, params, &initial)?;
    let scale = h0
        .abs()
        .max(initial.p * initial.p / (2.0 * params.m) + params.m * params.g * initial.x.abs())
        .max(f64::MIN_POSITIVE);
    let mut h_drift: f64 = 0.0;
    for s in &states {
        h_drift = h_drift.max((hamiltonian(form, params, s)? - h0).abs() / scale);
    }
    Ok(CanonicalTrajectory { form, params: p, times: solution.t.clone(), states, h_drift, solution })
}

/// v ∫_{v0}^{v} K(x, u)/u² du by quadrature. Differs from `lagrangian` by a
/// term linear in v; v0 and v must share a sign so the integrand stays finite.
pub fn kobussen_lagrangian(
    form: Formulation,
    params: &MediumParams,
    state: &PhaseState,
    v0: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(v0 * state.v > 0.0) {
        return Err(Error::InvalidParameter { name: "v0", value: v0, reason: "must be nonzero with the sign of v" });
    }
    let x = state.x;
    let failure = std::cell::RefCell::new(None);
    let q = integrate_1d(
        |u| match constant_of_motion(form, params, &PhaseState::new(x, u)) {
            Ok(k) => k / (u * u),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        v0,
        state.v,
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let q = q?;
    q.require_converged("kobussen integral")?;
    Ok(state.v * q.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn nat(alpha: f64) -> MediumParams {
        MediumParams::natural(alpha).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng) -> (MediumParams, PhaseState) {
        let p = nat(rng.gen_range(0.01..0.5));
        let vt = p.terminal_speed();
        (p, PhaseState::new(rng.gen_range(-2.0..3.0), rng.gen_range(-0.95..0.95) * vt))
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn frictionless_limits() {
        let p = nat(1e-10);
        let s = PhaseState::new(0.7, -1.3);
        let c = CanonicalState::new(0.7, -1.3);
        for form in Formulation::ALL {
            let l0 = 0.5 * 1.3f64.powi(2) - 0.7;
            assert!((lagrangian(form, &p, &s).unwrap() - l0).abs() < 1e-9);
            let h0 = 0.5 * 1.3f64.powi(2) + 0.7;
            assert!((hamiltonian(form, &p, &c).unwrap() - h0).abs() < 1e-9);
            assert!((velocity_from_momentum(form, &p, 0.7, -1.3).unwrap() + 1.3).abs() < 1e-9);
        }
        let p0 = nat(0.0);
        assert_eq!(hamilton_equations(Formulation::Exp, &p0, &CanonicalState::new(1.0, 2.0)).unwrap(), (2.0, -1.0));
        assert_eq!(
            hamiltonian_first_order(Formulation::Log, &p0, &c).unwrap(),
            hamiltonian(Formulation::Log, &p0, &c).unwrap()
        );
    }

    #[test]
    fn trivial_values() {
        let p = nat(0.3);
        for form in Formulation::ALL {
            assert_eq!(momentum(form, &p, &PhaseState::new(1.0, 0.0)).unwrap(), 0.0);
            assert_eq!(velocity_from_momentum(form, &p, 1.0, 0.0).unwrap(), 0.0);
        }
        assert_eq!(lagrangian(Formulation::Log, &p, &PhaseState::new(2.0, 0.0)).unwrap(), -2.0);
        assert_eq!(hamiltonian(Formulation::Log, &p, &CanonicalState::new(2.0, 0.0)).unwrap(), 2.0);
        let vt = p.terminal_speed();
        let near = momentum(Formulation::Log, &p, &PhaseState::new(0.0, vt * (1.0 - 1e-10))).unwrap();
        assert!(near > 10.0);
        assert!(momentum(Formulation::Log, &p, &PhaseState::new(0.0, vt)).is_err());
        let h = hamiltonian_first_order(Formulation::Log, &nat(0.1), &CanonicalState::new(0.0, 1.0)).unwrap();
        assert!((h - (0.5 - 0.1 / 12.0)).abs() < 1e-15);
    }

    #[test]
    fn lagrangian_branches_meet() {
        let p = nat(0.2);
        let vt = p.terminal_speed();
        let v = vt * LAGRANGIAN_SERIES_W2.sqrt();
        let below = lagrangian(Formulation::Log, &p, &PhaseState::new(0.0, v * (1.0 - 1e-12))).unwrap();
        let above = lagrangian(Formulation::Log, &p, &PhaseState::new(0.0, v)).unwrap();
        assert!(rel(below, above) < 1e-11);
    }

    #[test]
    fn legendre_identity_and_momentum_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (p, s) = random_state(&mut rng);
            for form in Formulation::ALL {
                let c = to_canonical(form, &p, &s).unwrap();
                let h = hamiltonian(form, &p, &c).unwrap();
                let k = constant_of_motion(form, &p, &s).unwrap();
                assert!(rel(h, k) < 1e-10, "{form}: H={h} K={k}");

                let dv = 1e-6 * p.terminal_speed().min(1.0);
                let l = |v: f64| lagrangian(form, &p, &PhaseState::new(s.x, v)).unwrap();
                let fd = (l(s.v + dv) - l(s.v - dv)) / (2.0 * dv);
                assert!((fd - c.p).abs() < 1e-7 * c.p.abs().max(1.0), "{form}: {fd} vs {}", c.p);

                let back = velocity_from_momentum(form, &p, s.x, c.p).unwrap();
                assert!((back - s.v).abs() < 1e-12 * s.v.abs().max(1e-3));
            }
        }
    }

    #[test]
    fn hamilton_partials_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (p, s) = random_state(&mut rng);
            for form in Formulation::ALL {
                let c = to_canonical(form, &p, &s).unwrap();
                let (hp, mhx) = hamilton_equations(form, &p, &c).unwrap();
                let h = |x: f64, q: f64| hamiltonian(form, &p, &CanonicalState::new(x, q)).unwrap();
                let d = 1e-5;
                let fx = (h(c.x + d, c.p) - h(c.x - d, c.p)) / (2.0 * d);
                let fp = (h(c.x, c.p + d) - h(c.x, c.p - d)) / (2.0 * d);
                assert!((fp - hp).abs() < 1e-7 * hp.abs().max(1.0), "{form} dH/dp");
                assert!((fx + mhx).abs() < 1e-7 * mhx.abs().max(1.0), "{form} dH/dx");
                // dx/dt recovers the velocity
                assert!((hp - s.v).abs() < 1e-12 * s.v.abs().max(1.0));
            }
        }
    }

    #[test]
    fn first_order_remainder_is_quadratic() {
        let c = CanonicalState::new(0.6, 0.9);
        for form in Formulation::ALL {
            let rem = |a: f64| {
                let p = nat(a);
                (hamiltonian(form, &p, &c).unwrap() - hamiltonian_first_order(form, &p, &c).unwrap()).abs()
            };
            let ratio = rem(0.01) / rem(0.005);
            assert!((ratio - 4.0).abs() < 0.2, "{form} ratio {ratio}");
            let r: Vec<f64> = [1e-2, 5e-3, 2.5e-3].iter().map(|&a| rem(a)).collect();
            let order = ((r[0] / r[1]).log2() + (r[1] / r[2]).log2()) / 2.0;
            assert!(order >= 1.9, "{form} order {order}");
        }
    }

    #[test]
    fn canonical_flows_reproduce_dynamics() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let p = nat(rng.gen_range(0.01..0.5));
            let vt = p.terminal_speed();
            let s0 = PhaseState::new(rng.gen_range(0.0..5.0), rng.gen_range(-0.8..0.2) * vt);
            let direct = integrate(&p, s0, 2.0, 1e-10).unwrap();
            for form in Formulation::ALL {
                let flow = integrate_canonical(form, &p, to_canonical(form, &p, &s0).unwrap(), 2.0, 1e-10).unwrap();
                assert!(flow.h_drift < 1e-8, "{form} drift {}", flow.h_drift);
                for i in 0..=40 {
                    let t = 2.0 * i as f64 / 40.0;
                    let a = direct.state_at(t);
                    let b = flow.phase_at(t).unwrap();
                    assert!((a.x - b.x).abs() < 1e-6, "{form} x at {t}");
                }
            }
        }
    }

    #[test]
    fn euler_lagrange_residual_along_trajectory() {
        let p = nat(0.2);
        let traj = integrate(&p, PhaseState::new(3.0, -0.5), 2.0, 1e-12).unwrap();
        for form in Formulation::ALL {
            for i in 1..20 {
                let t = 2.0 * i as f64 / 20.0;
                let dt = 1e-3;
                let pm = momentum(form, &p, &traj.state_at(t - dt)).unwrap();
                let pp = momentum(form, &p, &traj.state_at(t + dt)).unwrap();
                let s = traj.state_at(t);
                let dx = 1e-5;
                let lx = (lagrangian(form, &p, &PhaseState::new(s.x + dx, s.v)).unwrap()
                    - lagrangian(form, &p, &PhaseState::new(s.x - dx, s.v)).unwrap())
                    / (2.0 * dx);
                let res = (pp - pm) / (2.0 * dt) - lx;
                assert!(res.abs() < 1e-5 * p.m * p.g, "{form} residual {res} at {t}");
            }
        }
    }

    #[test]
    fn kobussen_quadrature_reproduces_lagrangian() {
        let p = nat(0.25);
        let spec = QuadratureSpec::default();
        for form in Formulation::ALL {
            for &(x, v0) in &[(0.5, -0.3), (1.2, 0.4)] {
                // (L - L_K)/v must not depend on v.
                let gauge: Vec<f64> = [1.0, 1.5, 2.5]
                    .iter()
                    .map(|&f| {
                        let s = PhaseState::new(x, v0 * f);
                        let lk = kobussen_lagrangian(form, &p, &s, v0, &spec).unwrap();
                        (lagrangian(form, &p, &s).unwrap() - lk) / s.v
                    })
                    .collect();
                assert!((gauge[0] - gauge[1]).abs() < 1e-10, "{form} {gauge:?}");
                assert!((gauge[0] - gauge[2]).abs() < 1e-10, "{form} {gauge:?}");
            }
        }
        assert!(kobussen_lagrangian(Formulation::Exp, &p, &PhaseState::new(0.0, 1.0), -1.0, &spec).is_err());
    }
}
