//! Run every verification check and print a compact summary.

use dissipative_fall::verify::{run, DEFAULT_SEED};

fn main() {
    let report = run(DEFAULT_SEED);
    for c in &report.checks {
        println!("{} {:<36} {:.2e} <= {:.0e}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.observed, c.tolerance);
    }
    for a in &report.adjudications {
        println!("info {:<36} printed {:.6e}, validated {:.6e}", a.name, a.printed, a.validated);
    }
    println!("{:.2} s, all passed: {}", report.elapsed_seconds, report.passed);
}
