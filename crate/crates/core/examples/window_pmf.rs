//! Simulated critical-window histograms against the closed-form laws.
//!
//! ```bash
//! cargo run --release --example window_pmf -- 1000000
//! ```

use mcvuln::analytic::{window_pmf, window_pmf_bounds};
use mcvuln::montecarlo::{estimate_window_pmf, Sampling};
use mcvuln::{MemoryModel, ModelName, ModelParams};

pub fn run_example() -> mcvuln::Result<()> {
    run(20_000)
}

fn run(samples: u64) -> mcvuln::Result<()> {
    let params = ModelParams::default();
    let sampling = Sampling::new(samples, mcvuln::DEFAULT_SEED);
    for model in MemoryModel::PRESETS {
        let h = estimate_window_pmf(&model, &params, &sampling)?;
        println!("{model} ({samples} samples, m = {}):", params.program_len);
        for gamma in 0..=6 {
            let e = h.estimate(gamma);
            let reference = match model.name() {
                ModelName::Sc | ModelName::Wo => {
                    format!("{:.6}", window_pmf(model.name(), gamma as u32)?.to_f64())
                }
                ModelName::Tso => {
                    let b = window_pmf_bounds(gamma as u32);
                    format!("[{:.6}, {:.6}]", b.lower().to_f64(), b.upper().to_f64())
                }
                _ => "-".into(),
            };
            println!("  {gamma}  {:.6} +- {:.6}   {reference}", e.mean, e.stderr);
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
