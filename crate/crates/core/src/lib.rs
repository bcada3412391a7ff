//! Probabilistic analysis of how memory consistency models affect the
//! chance that a canonical atomicity violation (an unsynchronized
//! read-modify-write) manifests.
//!
//! The pipeline has two random processes:
//!
//! * [`settling`]: a random load/store program is reordered per thread
//!   according to a [`model::MemoryModel`], widening the critical window
//!   between the racing load and store.
//! * [`shift`]: the threads' windows are translated by i.i.d. geometric
//!   offsets; the bug is avoided exactly when all windows are disjoint.
//!
//! [`montecarlo`] simulates the pipeline end to end, [`analytic`] holds the
//! exact-rational closed forms, and [`oracle`] brute-forces small instances
//! as independent ground truth.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod format;
pub mod model;
pub mod montecarlo;
pub mod oracle;
pub mod rng;
pub mod settling;
pub mod shift;
pub mod verify;

pub use analytic::{BoundedValue, ExactValue};
pub use error::{Error, Result};
pub use model::{InstructionType, MemoryModel, ModelName, ModelParams};
pub use rng::RandomStream;
pub use settling::{FinalOrder, Program, WindowSample};
pub use shift::{Overlap, SegmentLengths, ShiftVector};

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 1;
