//! Both Hamiltonians generate the same trajectory in x, with different
//! canonical momenta along the way.

use dissipative_fall::dynamics::integrate;
use dissipative_fall::mechanics::{hamiltonian, integrate_canonical, to_canonical};
use dissipative_fall::{Formulation, MediumParams, PhaseState};

fn main() -> dissipative_fall::Result<()> {
    let params = MediumParams::new(1.0, 1.0, 0.3)?;
    let start = PhaseState::new(2.0, 0.8);
    let direct = integrate(&params, start, 2.0, 1e-10)?;
    for form in Formulation::ALL {
        let c0 = to_canonical(form, &params, &start)?;
        let flow = integrate_canonical(form, &params, c0, 2.0, 1e-10)?;
        let worst = (0..=100)
            .map(|i| {
                let t = 0.02 * i as f64;
                (flow.state_at(t).x - direct.state_at(t).x).abs()
            })
            .fold(0.0, f64::max);
        let end = flow.state_at(2.0);
        println!(
            "{form}: p(0) = {:.6}, p(2) = {:.6}, H = {:.9}, H drift {:.1e}, max |x - x_direct| {:.1e}",
            c0.p,
            end.p,
            hamiltonian(form, &params, &c0)?,
            flow.h_drift,
            worst
        );
    }
    Ok(())
}
