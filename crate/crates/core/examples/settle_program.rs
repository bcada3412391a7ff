//! Draw one random program and settle it under each preset model.
//!
//! ```bash
//! cargo run --example settle_program -- 16 7
//! ```

use mcvuln::settling::{critical_window, generate_program, settle};
use mcvuln::{MemoryModel, ModelParams, RandomStream};

pub fn run_example() -> mcvuln::Result<()> {
    run(12, 3)
}

fn render(types: &[mcvuln::InstructionType]) -> String {
    types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

fn run(m: usize, seed: u64) -> mcvuln::Result<()> {
    let params = ModelParams::with_program_len(m);
    params.validate()?;
    let master = RandomStream::new(seed);
    let program = generate_program(&params, &mut master.split(0));
    println!("program (critical ld, st last): {}", render(program.types()));

    for (k, model) in MemoryModel::PRESETS.iter().enumerate() {
        let order = settle(&program, model, &params, &mut master.split(k as u64 + 1));
        let w = critical_window(&order);
        println!(
            "{:<4} {}   gamma = {}, segment length = {}",
            model.to_string(),
            render(&order.settled_types(&program)),
            w.gamma,
            w.segment_length
        );
    }
    Ok(())
}

fn main() -> mcvuln::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().ok());
    let m = args.next().flatten().unwrap_or(16) as usize;
    let seed = args.next().flatten().unwrap_or(mcvuln::DEFAULT_SEED);
    run(m, seed)
}
