//! Random program generation and the per-model settling process.
//!
//! Positions are 0-based throughout: a program of body length `m` occupies
//! positions `0..m+2`, with the critical load at `m` and the critical store
//! at `m + 1`.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{InstructionType, MemoryModel, ModelParams, PairMatrix};
use crate::rng::Coin;

/// A length-`m + 2` sequence of instruction types ending in the critical
/// load and critical store. The critical pair shares one address; every
/// other instruction touches a distinct location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    types: Vec<InstructionType>,
}

impl Program {
    /// Appends the critical load/store pair to `body`.
    pub fn from_body(body: impl IntoIterator<Item = InstructionType>) -> Self {
        let mut types: Vec<_> = body.into_iter().collect();
        types.push(InstructionType::Load);
        types.push(InstructionType::Store);
        Program { types }
    }

    pub fn types(&self) -> &[InstructionType] {
        &self.types
    }

    pub fn body(&self) -> &[InstructionType] {
        &self.types[..self.body_len()]
    }

    /// `m`, the number of non-critical instructions.
    pub fn body_len(&self) -> usize {
        self.types.len() - 2
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn critical_load(&self) -> usize {
        self.body_len()
    }

    pub fn critical_store(&self) -> usize {
        self.body_len() + 1
    }

    pub fn store_count(&self) -> usize {
        self.body().iter().filter(|t| t.is_store()).count()
    }
}

/// Settled program order.
///
/// `order[k]` is the initial position of the instruction now at position
/// `k`; `pi` is its inverse, mapping initial to settled positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalOrder {
    order: Vec<usize>,
    pi: Vec<usize>,
}

impl FinalOrder {
    pub fn identity(len: usize) -> Self {
        FinalOrder {
            order: (0..len).collect(),
            pi: (0..len).collect(),
        }
    }

    /// Builds an order from `pi` (initial position → settled position),
    /// rejecting anything that is not a bijection on `0..len` with at
    /// least the two critical slots.
    pub fn from_pi(pi: Vec<usize>) -> Result<Self> {
        let n = pi.len();
        if n < 2 {
            return Err(Error::Usage("an order needs at least the critical pair".into()));
        }
        let mut order = vec![usize::MAX; n];
        for (initial, &settled) in pi.iter().enumerate() {
            if settled >= n || order[settled] != usize::MAX {
                return Err(Error::Usage(format!("pi is not a permutation of 0..{n}")));
            }
            order[settled] = initial;
        }
        Ok(FinalOrder { order, pi })
    }

    fn from_order(order: Vec<usize>) -> Self {
        let mut pi = vec![0; order.len()];
        for (settled, &initial) in order.iter().enumerate() {
            pi[initial] = settled;
        }
        FinalOrder { order, pi }
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.pi.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Instruction types in settled order.
    pub fn settled_types(&self, program: &Program) -> Vec<InstructionType> {
        self.order.iter().map(|&i| program.types[i]).collect()
    }
}

/// Size of the settled critical window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowSample {
    /// Instructions strictly between the critical load and store.
    pub gamma: usize,
    /// `gamma + 2`, the segment length fed to the shift process.
    pub segment_length: usize,
}

impl WindowSample {
    pub fn from_gamma(gamma: usize) -> Self {
        WindowSample {
            gamma,
            segment_length: gamma + 2,
        }
    }
}

/// Draws a program whose body entries are independently stores with
/// probability `params.store_prob`.
pub fn generate_program<C: Coin>(params: &ModelParams, coin: &mut C) -> Program {
    let p = params.store_prob;
    Program::from_body((0..params.program_len).map(|_| {
        if coin.flip(p) {
            InstructionType::Store
        } else {
            InstructionType::Load
        }
    }))
}

/// Runs settling rounds `rounds` over `types`, extending the settled order
/// (initial indices) held in `order`, which must already contain the
/// result of every earlier round.
///
/// Round `i` appends instruction `i` and swaps it upward while each swap
/// succeeds; the round stops on the first failure or at position 0. The
/// last instruction of a full program is the critical store, which never
/// passes the critical load.
///
/// Returns the position where the last settled instruction came to rest.
pub(crate) fn settle_rounds<C: Coin>(
    types: &[InstructionType],
    rounds: Range<usize>,
    table: &PairMatrix<f64>,
    coin: &mut C,
    order: &mut Vec<u32>,
) -> usize {
    debug_assert!(rounds.end <= types.len() && order.len() == rounds.start);
    let crit_store = types.len() - 1;
    let crit_load = types.len() - 2;
    let mut rest = 0;
    for i in rounds {
        let later = types[i];
        order.push(i as u32);
        let mut k = i;
        while k > 0 {
            let above = order[k - 1] as usize;
            if i == crit_store && above == crit_load {
                break;
            }
            let q = table.get(types[above], later);
            if q <= 0.0 || !coin.flip(q) {
                break;
            }
            order.swap(k - 1, k);
            k -= 1;
        }
        rest = k;
    }
    rest
}

/// Settles `program` under `model`.
pub fn settle<C: Coin>(
    program: &Program,
    model: &MemoryModel,
    params: &ModelParams,
    coin: &mut C,
) -> FinalOrder {
    let table = model.swap_table(params);
    let mut order = Vec::with_capacity(program.len());
    settle_rounds(&program.types, 0..program.len(), &table, coin, &mut order);
    FinalOrder::from_order(order.into_iter().map(|i| i as usize).collect())
}

pub fn critical_window(order: &FinalOrder) -> WindowSample {
    let n = order.len();
    let load = order.pi[n - 2];
    let store = order.pi[n - 1];
    debug_assert!(store > load);
    WindowSample::from_gamma(store - load - 1)
}

/// Reusable settling workspace for hot sampling loops.
#[derive(Debug)]
pub struct Settler {
    table: PairMatrix<f64>,
    order: Vec<u32>,
}

impl Settler {
    pub fn new(model: &MemoryModel, params: &ModelParams) -> Self {
        Settler {
            table: model.swap_table(params),
            order: Vec::with_capacity(params.program_len + 2),
        }
    }

    /// Settles the full program and returns only its critical window.
    pub fn window<C: Coin>(&mut self, program: &Program, coin: &mut C) -> WindowSample {
        let types = program.types();
        let n = types.len();
        // The critical store is inserted below the critical load and cannot
        // pass it, so the load's resting place is final after round m+1.
        self.order.clear();
        let load = settle_rounds(types, 0..n - 1, &self.table, coin, &mut self.order);
        let store = settle_rounds(types, n - 1..n, &self.table, coin, &mut self.order);
        WindowSample::from_gamma(store - load - 1)
    }

    /// Settles only the body (rounds before the critical load) and returns
    /// the resulting type sequence.
    pub fn body<'a, C: Coin>(
        &'a mut self,
        program: &'a Program,
        coin: &mut C,
    ) -> impl Iterator<Item = InstructionType> + 'a {
        let types = program.types();
        self.order.clear();
        settle_rounds(types, 0..program.body_len(), &self.table, coin, &mut self.order);
        self.order.iter().map(move |&i| types[i as usize])
    }
}
