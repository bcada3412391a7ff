//! Brute-force exact computations at desk scale.
//!
//! These routines share no code path with [`crate::analytic`] or the
//! sampling engine beyond the model definitions, and serve as ground truth
//! in tests and `verify`.

use std::collections::{BTreeMap, HashMap};

use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::analytic::{BoundedValue, ExactValue};
use crate::error::{Error, Result};
use crate::model::{InstructionType, MemoryModel, ModelParams, PairMatrix};
use crate::shift::SegmentLengths;

pub const MAX_ORACLE_PROGRAM_LEN: usize = 14;
pub const MAX_ORACLE_SEGMENTS: usize = 5;
pub const MAX_ORACLE_CAP: u64 = 40;

/// Settled type sequence of length `len`, bit `k` set when position `k`
/// holds a store.
type TypeMask = u32;

fn type_at(mask: TypeMask, k: usize) -> InstructionType {
    if mask >> k & 1 == 1 {
        InstructionType::Store
    } else {
        InstructionType::Load
    }
}

/// Inserts `t` at position `k` of a `len`-long mask, shifting the tail down.
fn insert_at(mask: TypeMask, len: usize, k: usize, t: InstructionType) -> TypeMask {
    debug_assert!(k <= len);
    let low = mask & ((1 << k) - 1);
    let high = (mask >> k) << (k + 1);
    low | high | ((t.is_store() as TypeMask) << k)
}

/// Distribution of the resting position of an instruction of type `t`
/// appended at position `len` and swapped upward, as `(position, prob)`.
fn resting_positions(
    mask: TypeMask,
    len: usize,
    t: InstructionType,
    table: &PairMatrix<BigRational>,
    stop_above: Option<usize>,
) -> Vec<(usize, BigRational)> {
    let mut out = Vec::with_capacity(len + 1);
    let mut reach = BigRational::one();
    let mut k = len;
    loop {
        if k == 0 || stop_above == Some(k - 1) {
            out.push((k, reach));
            break;
        }
        let q = table.get_ref(type_at(mask, k - 1), t);
        if q.is_zero() {
            out.push((k, reach));
            break;
        }
        let fail = BigRational::one() - q;
        if !fail.is_zero() {
            out.push((k, &reach * &fail));
        }
        reach *= q;
        k -= 1;
    }
    out
}

/// Exact pmf of `gamma` under `model` at finite body length, summing over
/// every program and every settling decision path.
///
/// Programs are folded into the settling recursion: after round `r` the
/// state is the settled type string of the first `r` instructions, and all
/// paths reaching the same string are merged since later rounds depend on
/// nothing else.
pub fn exact_window_pmf(model: &MemoryModel, params: &ModelParams) -> Result<BTreeMap<usize, ExactValue>> {
    let m = params.program_len;
    if m > MAX_ORACLE_PROGRAM_LEN {
        return Err(Error::ResourceGuard(format!(
            "oracle enumeration is limited to program length {MAX_ORACLE_PROGRAM_LEN}, got {m}"
        )));
    }
    params.validate()?;
    let p_store = ExactValue::from_f64(params.store_prob)?.into_ratio();
    let p_load = BigRational::one() - &p_store;
    let swap = model.swap_table(params);
    let mut table = PairMatrix::splat(BigRational::zero());
    for e in InstructionType::ALL {
        for l in InstructionType::ALL {
            table.set(e, l, ExactValue::from_f64(swap.get(e, l))?.into_ratio());
        }
    }

    let mut states: HashMap<TypeMask, BigRational> = HashMap::from([(0, BigRational::one())]);
    for len in 0..m {
        let mut next: HashMap<TypeMask, BigRational> = HashMap::with_capacity(states.len() * 2);
        for (&mask, w) in &states {
            for (t, pt) in [
                (InstructionType::Store, &p_store),
                (InstructionType::Load, &p_load),
            ] {
                if pt.is_zero() {
                    continue;
                }
                let wt = w * pt;
                for (k, pk) in resting_positions(mask, len, t, &table, None) {
                    let key = insert_at(mask, len, k, t);
                    *next.entry(key).or_insert_with(BigRational::zero) += &wt * pk;
                }
            }
        }
        states = next;
    }

    let mut pmf: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (&mask, w) in &states {
        for (ld, p_ld) in resting_positions(mask, m, InstructionType::Load, &table, None) {
            let w_ld = w * p_ld;
            let with_ld = insert_at(mask, m, ld, InstructionType::Load);
            // The critical store starts at m + 1 and may not pass the load.
            for (st, p_st) in resting_positions(with_ld, m + 1, InstructionType::Store, &table, Some(ld)) {
                let gamma = st - ld - 1;
                *pmf.entry(gamma).or_insert_with(BigRational::zero) += &w_ld * p_st;
            }
        }
    }
    Ok(pmf.into_iter().map(|(g, v)| (g, ExactValue::from(v))).collect())
}

/// Brackets `Pr[A(lengths)]` by enumerating every shift vector in
/// `[0, cap]^n` with its exact probability. The upper end adds the
/// probability `n 2^-(cap+1)` that some shift exceeds the cap.
pub fn exact_disjoint(lengths: &SegmentLengths, cap: u64) -> Result<BoundedValue> {
    let n = lengths.len();
    if n > MAX_ORACLE_SEGMENTS || cap > MAX_ORACLE_CAP {
        return Err(Error::ResourceGuard(format!(
            "oracle enumeration limited to {MAX_ORACLE_SEGMENTS} segments and cap {MAX_ORACLE_CAP}"
        )));
    }
    let len: Vec<u64> = lengths.as_slice().iter().map(|&l| l as u64).collect();
    // Disjoint vectors tallied by total shift; each has probability
    // 2^-(total + n).
    let mut by_total = vec![0u64; n * cap as usize + 1];
    let mut shifts = vec![0u64; n];
    let mut segs: Vec<(u64, u64)> = Vec::with_capacity(n);
    loop {
        segs.clear();
        segs.extend(shifts.iter().zip(&len).map(|(&s, &l)| (s, s + l)));
        segs.sort_unstable();
        if segs.windows(2).all(|w| w[1].0 > w[0].1) {
            by_total[shifts.iter().sum::<u64>() as usize] += 1;
        }
        // Odometer increment.
        let mut i = 0;
        while i < n && shifts[i] == cap {
            shifts[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        shifts[i] += 1;
    }
    let lower =
        by_total
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .fold(ExactValue::zero(), |acc, (total, &c)| {
                acc + ExactValue::integer(c as i64) * ExactValue::pow2_neg(total as u64 + n as u64)
            });
    let tail = ExactValue::integer(n as i64) * ExactValue::pow2_neg(cap + 1);
    let upper = &lower + tail;
    BoundedValue::new(lower, upper)
}

/// Counts non-decreasing `y`-tuples over `1..=z` summing to `x` by direct
/// recursion.
pub fn brute_partition_count(x: usize, y: usize, z: usize) -> u64 {
    fn go(remaining: usize, parts: usize, min: usize, max: usize) -> u64 {
        if parts == 0 {
            return (remaining == 0) as u64;
        }
        (min..=max.min(remaining))
            .map(|v| go(remaining - v, parts - 1, v, max))
            .sum()
    }
    go(x, y, 1, z)
}
