//! Heat-capacity difference of the two formulations over inverse temperature.

use dissipative_fall::commands::describe_crossovers;
use dissipative_fall::statmech::{default_beta_grid, sweep_beta, EnsembleParams, SweepTolerances};

fn main() -> dissipative_fall::Result<()> {
    let table = sweep_beta(&EnsembleParams::default(), &default_beta_grid(), &SweepTolerances::default())?;
    println!("{:>12} {:>14} {:>14} {:>12}", "beta", "C_V log", "C_V exp", "exp - log");
    for row in table.rows.iter().step_by(7) {
        println!("{:>12.4e} {:>14.10} {:>14.10} {:>12.4e}", row.beta, row.cv1, row.cv2, row.delta_cv);
    }
    for line in describe_crossovers(&table) {
        println!("{line}");
    }
    println!("oracle-flagged points: {}", table.flagged_points);
    Ok(())
}
