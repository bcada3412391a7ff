//! Exhaustive window pmf at small program length, printed next to the
//! closed forms.
//!
//! ```bash
//! cargo run --release --example exact_window_oracle -- 12
//! ```

use mcvuln::analytic::{window_pmf, window_pmf_bounds};
use mcvuln::oracle::exact_window_pmf;
use mcvuln::{MemoryModel, ModelName, ModelParams};

pub fn run_example() -> mcvuln::Result<()> {
    run(6)
}

fn run(m: usize) -> mcvuln::Result<()> {
    let params = ModelParams::with_program_len(m);
    println!(
        "program length m = {m}; truncation slack 2^-(m-2) = {:.3e}\n",
        2f64.powi(2 - m as i32)
    );

    for model in [MemoryModel::WO, MemoryModel::TSO, MemoryModel::PSO] {
        let pmf = exact_window_pmf(&model, &params)?;
        println!("{model}:");
        println!("  gamma  exact(m)           closed form");
        for (&gamma, p) in pmf.iter().take(9) {
            let reference = match model.name() {
                ModelName::Wo => format!("{:.12}", window_pmf(ModelName::Wo, gamma as u32)?.to_f64()),
                ModelName::Tso => {
                    let b = window_pmf_bounds(gamma as u32);
                    format!("[{:.12}, {:.12}]", b.lower().to_f64(), b.upper().to_f64())
                }
                _ => "(simulated only)".to_string(),
            };
            println!("  {gamma:>5}  {:.12}     {reference}", p.to_f64());
        }
        println!();
    }
    Ok(())
}

fn main() -> mcvuln::Result<()> {
    let m = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    run(m)
}
