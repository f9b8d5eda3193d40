//! Drop from rest under quadratic drag: integrator vs the exact solution,
//! and conservation of both constants of motion.

use dissipative_fall::dynamics::{analytic_drop, integrate};
use dissipative_fall::{MediumParams, PhaseState};

fn main() -> dissipative_fall::Result<()> {
    let params = MediumParams::new(1.0, 1.0, 0.25)?;
    let traj = integrate(&params, PhaseState::new(10.0, 0.0), 6.0, 1e-10)?;
    println!("terminal speed {:.6}", params.terminal_speed());
    println!("{:>6} {:>14} {:>14} {:>10}", "t", "x", "v", "|x - x_exact|");
    for i in 0..=6 {
        let t = i as f64;
        let s = traj.state_at(t);
        let exact = analytic_drop(&params, 10.0, t)?;
        println!("{t:>6.1} {:>14.9} {:>14.9} {:>10.2e}", s.x, s.v, (s.x - exact.x).abs());
    }
    println!("K1 drift {:.2e}, K2 drift {:.2e}", traj.k1_drift.unwrap_or(f64::NAN), traj.k2_drift);
    Ok(())
}
