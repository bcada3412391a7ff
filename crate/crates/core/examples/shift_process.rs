//! The shift process alone: geometric offsets, disjointness under both
//! overlap conventions, and shift-only estimates against the exact value.
//!
//! ```bash
//! cargo run --release --example shift_process
//! ```

use mcvuln::analytic::disjoint_probability;
use mcvuln::montecarlo::{estimate_disjoint_fixed, Sampling};
use mcvuln::shift::disjoint_with;
use mcvuln::{Overlap, RandomStream, SegmentLengths, ShiftVector};

pub fn run_example() -> mcvuln::Result<()> {
    run(50_000)
}

fn run(samples: u64) -> mcvuln::Result<()> {
    let lengths: SegmentLengths = "2,2,3".parse()?;
    let mut rng = RandomStream::new(mcvuln::DEFAULT_SEED);
    println!("lengths ({lengths}):");
    for _ in 0..5 {
        let shifts = ShiftVector::sample(lengths.len(), &mut rng);
        let closed = disjoint_with(&lengths, &shifts, Overlap::Closed)?;
        let index_set = disjoint_with(&lengths, &shifts, Overlap::IndexSet)?;
        println!(
            "  shifts {:?}  disjoint: closed {closed}, index-set {index_set}",
            shifts.0
        );
    }

    let sampling = Sampling::new(samples, mcvuln::DEFAULT_SEED);
    println!("\nshift-only estimates ({samples} samples):");
    for lens in ["2,2", "0,0", "2,2,2", "1,3,2,0"] {
        let lengths: SegmentLengths = lens.parse()?;
        let exact = disjoint_probability(&lengths)?;
        let closed = estimate_disjoint_fixed(&lengths, &sampling, Overlap::Closed)?;
        let index_set = estimate_disjoint_fixed(&lengths, &sampling, Overlap::IndexSet)?;
        println!(
            "  ({lengths})  exact {:.6}  closed {:.6} +- {:.6}  index-set {:.6}",
            exact.to_f64(),
            closed.mean,
            closed.stderr,
            index_set.mean
        );
    }
    Ok(())
}

fn main() -> mcvuln::Result<()> {
    run(1_000_000)
}
