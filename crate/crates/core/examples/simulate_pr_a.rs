//! End-to-end Monte Carlo estimates of Pr[A] across models and thread
//! counts.
//!
//! ```bash
//! cargo run --release --example simulate_pr_a -- 1000000
//! ```

use mcvuln::montecarlo::{estimate_pr_a, PrAOptions, Sampling};
use mcvuln::{MemoryModel, ModelParams};

pub fn run_example() -> mcvuln::Result<()> {
    run(10_000)
}

fn run(samples: u64) -> mcvuln::Result<()> {
    let params = ModelParams::default();
    let sampling = Sampling::new(samples, mcvuln::DEFAULT_SEED);
    println!("{samples} samples per cell, m = {}", params.program_len);
    println!("model  n  mean        95% interval");
    for model in MemoryModel::PRESETS {
        for n in 2..=4 {
            let e = estimate_pr_a(&model, n, &params, &sampling, &PrAOptions::default())?;
            println!(
                "{:<5} {n:>2}  {:.6}  [{:.6}, {:.6}]",
                model.to_string(),
                e.mean,
                e.ci95.0,
                e.ci95.1
            );
        }
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
