//! Quantum bouncer levels and the first-order shifts of both Hamiltonians,
//! with the closed forms checked against quadrature matrix elements.

use dissipative_fall::quantum::{spectrum, w_oracle, BouncerBasis};
use dissipative_fall::Formulation;

fn main() -> dissipative_fall::Result<()> {
    let basis = BouncerBasis::natural(0.01, 11)?;
    println!("l_g = {:.9}", basis.l_g);
    println!("{:>3} {:>12} {:>13} {:>13} {:>9} {:>6}", "n", "E0", "dE_log", "dE_exp", "dev", "valid");
    for line in spectrum(&basis, 10)? {
        let dev_log = (line.de_log / w_oracle(&basis, Formulation::Log, line.n)? - 1.0).abs();
        let dev_exp = (line.de_exp / w_oracle(&basis, Formulation::Exp, line.n)? - 1.0).abs();
        println!(
            "{:>3} {:>12.8} {:>13.6e} {:>13.6e} {:>9.1e} {:>6}",
            line.n,
            line.e0,
            line.de_log,
            line.de_exp,
            dev_log.max(dev_exp),
            line.first_order_valid
        );
    }
    Ok(())
}
