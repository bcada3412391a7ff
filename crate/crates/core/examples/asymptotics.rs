//! How fast Pr[A] collapses with the thread count under SC.
//!
//! ```bash
//! cargo run --example asymptotics
//! ```

use mcvuln::analytic::{sc_exponent_ratio, sc_pr_a};

pub fn run_example() -> mcvuln::Result<()> {
    println!("    n  log2 Pr[A]     log2 Pr[A] / n^2");
    for n in [2, 3, 4, 6, 8, 10, 20, 30, 50, 100, 200] {
        let p = sc_pr_a(n)?;
        println!("{n:>5}  {:>12.3}  {:>10.5}", p.log2(), sc_exponent_ratio(n)?);
    }
    println!("limit: -1.5");
    Ok(())
}

fn main() -> mcvuln::Result<()> {
    run_example()
}
