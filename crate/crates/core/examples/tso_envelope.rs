//! Quantities behind the TSO envelope: store runs above the critical load,
//! loads trapped in a store run, and the bottom-store recurrence.
//!
//! ```bash
//! cargo run --release --example tso_envelope -- 1000000
//! ```

use mcvuln::analytic::{
    bottom_store_prob, h_mu, missing_mass, partition_count, pr_f_exact, pr_f_lower, pr_l_lower,
};
use mcvuln::montecarlo::{estimate_bottom_store, estimate_l_mu, Sampling};
use mcvuln::{MemoryModel, ModelParams};

pub fn run_example() -> mcvuln::Result<()> {
    run(20_000)
}

fn run(samples: u64) -> mcvuln::Result<()> {
    let sampling = Sampling::new(samples, mcvuln::DEFAULT_SEED);
    let h = estimate_l_mu(&ModelParams::default(), &sampling)?;
    println!("store run directly above the critical load ({samples} samples):");
    for mu in 0..=5u32 {
        let e = h.estimate(mu as usize);
        println!(
            "  mu = {mu}  {:.5} +- {:.5}   lower bound {}",
            e.mean,
            e.stderr,
            pr_l_lower(mu)
        );
    }
    println!("  h(1) = {}, uncovered mass = {}", h_mu(1), missing_mass());

    println!("\nloads settling out of a run of mu stores, exact vs lower bound:");
    for (mu, q) in [(1, 2), (2, 2), (3, 2), (4, 3)] {
        println!(
            "  mu = {mu}, q = {q}:  {}  >=  {}",
            pr_f_exact(mu, q)?,
            pr_f_lower(mu, q)?
        );
    }
    println!("  phi(10, 3, 4) = {}", partition_count(10, 3, 4));

    println!("\nbottom body instruction is a store:");
    for m in [1u32, 2, 3, 6, 64] {
        let e = estimate_bottom_store(
            &MemoryModel::TSO,
            &ModelParams::with_program_len(m as usize),
            &sampling,
        )?;
        println!("  m = {m:>2}  {:.5}   exact {}", e.mean, bottom_store_prob(m)?);
    }
    Ok(())
}

fn main() -> mcvuln::Result<()> {
    let samples = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1_000_000);
    run(samples)
}
