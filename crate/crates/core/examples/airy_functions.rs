//! Airy functions, their zeros and the special functions used downstream.

use dissipative_fall::specfun::{airy_ai, airy_ai_prime, airy_zero, dawson, digamma, erfi, ln_gamma, trigamma};

fn main() -> dissipative_fall::Result<()> {
    println!("{:>3} {:>22} {:>12} {:>22}", "n", "z_n", "Ai(-z_n)", "Ai'(-z_n)");
    for n in [1, 2, 3, 5, 10, 20, 50, 100] {
        let z = airy_zero(n)?;
        println!("{n:>3} {z:>22.15} {:>12.1e} {:>22.15}", airy_ai(-z)?, airy_ai_prime(-z)?);
    }
    for x in [0.5, 1.0, 3.0] {
        println!("x = {x}: dawson {:.15}, erfi {:.15e}", dawson(x), erfi(x)?);
    }
    for s in [0.5, 2.0, 50.0] {
        println!("s = {s}: ln Gamma {:.15}, digamma {:.15}, trigamma {:.15}", ln_gamma(s)?, digamma(s)?, trigamma(s)?);
    }
    Ok(())
}
