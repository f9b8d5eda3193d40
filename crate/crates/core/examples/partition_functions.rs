//! Closed-form ln Z, U and C_V of both formulations next to their oracles.

use dissipative_fall::specfun::QuadratureSpec;
use dissipative_fall::statmech::{
    heat_capacity_oracle, internal_energy_oracle, log_partition_oracle, thermo_point, EnsembleParams,
};
use dissipative_fall::Formulation;

fn main() -> dissipative_fall::Result<()> {
    let spec = QuadratureSpec::default();
    for beta in [0.1, 1.0, 10.0, 1000.0] {
        let ens = EnsembleParams { beta, ..Default::default() };
        for form in Formulation::ALL {
            let p = thermo_point(form, &ens)?;
            let z = log_partition_oracle(form, &ens, &spec)?;
            let u = internal_energy_oracle(form, &ens)?;
            let c = heat_capacity_oracle(form, &ens)?;
            println!(
                "beta {beta:>7}: {form}  ln Z {:>14.9} ({:.0e})  U {:>12.6e} ({:.0e})  C_V {:.9} ({:.0e})",
                p.log_z,
                (p.log_z - z).abs(),
                p.u,
                (p.u / u - 1.0).abs(),
                p.c_v,
                (p.c_v / c - 1.0).abs()
            );
        }
    }
    Ok(())
}
