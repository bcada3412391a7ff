//! Exact two-thread probabilities that the bug stays hidden, and the
//! symmetric-group formula for arbitrary segment lengths.
//!
//! ```bash
//! cargo run --example two_thread_exact
//! ```

use mcvuln::analytic::{disjoint_probability, sc_pr_a, shift_constant, two_thread_pr_a, TwoThreadValue};
use mcvuln::{ModelName, SegmentLengths};

pub fn run_example() -> mcvuln::Result<()> {
    println!("Pr[A] for two threads (no overlap of critical windows):");
    for model in [ModelName::Sc, ModelName::Tso, ModelName::Wo] {
        match two_thread_pr_a(model)? {
            TwoThreadValue::Exact(v) => println!("  {model:<4} {v:<12} = {:.6}", v.to_f64()),
            TwoThreadValue::Bounded(b) => println!(
                "  {model:<4} in [{}, {}] = [{:.6}, {:.6}]",
                b.lower(),
                b.upper(),
                b.lower().to_f64(),
                b.upper().to_f64()
            ),
        }
    }

    println!("\nfixed segment lengths:");
    for lens in ["2,2", "2,2,2", "2,5", "3,1,4,1"] {
        let lengths: SegmentLengths = lens.parse()?;
        let p = disjoint_probability(&lengths)?;
        println!("  ({lengths})  {p}  ~ {:.3e}", p.to_f64());
    }

    println!("\nsequential consistency, n threads:");
    for n in 2..=6 {
        let p = sc_pr_a(n)?;
        println!(
            "  n = {n}  c(n) = {:<10}  Pr[A] = {p}",
            shift_constant(n)?.to_string()
        );
    }
    Ok(())
}

fn main() -> mcvuln::Result<()> {
    run_example()
}
