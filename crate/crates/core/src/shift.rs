//! The shift process: geometric per-thread offsets and the mutual
//! disjointness event over shifted integer segments.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::Coin;

/// Per-thread segment lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SegmentLengths(Vec<usize>);

impl SegmentLengths {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::Usage("at least one segment is required".into()));
        }
        Ok(SegmentLengths(lengths))
    }

    /// `n` copies of the same length.
    pub fn uniform(n: usize, length: usize) -> Result<Self> {
        Self::new(vec![length; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for SegmentLengths {
    type Err = Error;

    /// Parses a comma-separated list such as `2,2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let lengths = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Usage(format!("invalid segment length `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lengths)
    }
}

impl fmt::Display for SegmentLengths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftVector(pub Vec<u64>);

impl ShiftVector {
    pub fn sample<C: Coin>(n: usize, coin: &mut C) -> Self {
        ShiftVector((0..n).map(|_| sample_shift(coin)).collect())
    }
}

/// Draws `k` with probability `2^-(k+1)` by counting fair-coin failures
/// before the first success. Unbounded.
#[inline]
pub fn sample_shift<C: Coin>(coin: &mut C) -> u64 {
    let mut k = 0;
    while !coin.flip(0.5) {
        k += 1;
    }
    k
}

/// How a segment of length `len` translates into occupied integer points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overlap {
    /// Closed interval `[s, s + len]`: touching endpoints overlap.
    #[default]
    Closed,
    /// Index-set window: a segment of length `len` covers the `len` points
    /// `s..s + len`, i.e. the closed interval `[s, s + len - 1]`.
    IndexSet,
}

impl Overlap {
    /// Last occupied point of a segment of length `len` starting at `start`.
    #[inline]
    fn end(self, start: u64, len: usize) -> u64 {
        match self {
            Overlap::Closed => start + len as u64,
            Overlap::IndexSet => (start + len as u64).saturating_sub(1).max(start),
        }
    }
}

impl FromStr for Overlap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Overlap::Closed),
            "index-set" => Ok(Overlap::IndexSet),
            other => Err(Error::Usage(format!(
                "unknown overlap convention `{other}` (expected closed or index-set)"
            ))),
        }
    }
}

impl fmt::Display for Overlap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Overlap::Closed => "closed",
            Overlap::IndexSet => "index-set",
        })
    }
}

/// Whether the shifted closed segments `[s_i, s_i + len_i]` are pairwise
/// disjoint.
pub fn disjoint(lengths: &SegmentLengths, shifts: &ShiftVector) -> Result<bool> {
    disjoint_with(lengths, shifts, Overlap::Closed)
}

pub fn disjoint_with(lengths: &SegmentLengths, shifts: &ShiftVector, overlap: Overlap) -> Result<bool> {
    if lengths.len() != shifts.0.len() {
        return Err(Error::Usage(format!(
            "{} segment lengths but {} shifts",
            lengths.len(),
            shifts.0.len()
        )));
    }
    Ok(disjoint_slices(lengths.as_slice(), &shifts.0, overlap))
}

/// Allocation-free core of [`disjoint_with`]; slices must have equal length.
pub(crate) fn disjoint_slices(lengths: &[usize], shifts: &[u64], overlap: Overlap) -> bool {
    let n = lengths.len();
    for i in 0..n {
        let (si, ei) = (shifts[i], overlap.end(shifts[i], lengths[i]));
        for j in i + 1..n {
            let (sj, ej) = (shifts[j], overlap.end(shifts[j], lengths[j]));
            if si <= ej && sj <= ei {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;
    use proptest::prelude::*;

    fn lens(v: &[usize]) -> SegmentLengths {
        SegmentLengths::new(v.to_vec()).unwrap()
    }

    #[test]
    fn disjoint_examples() {
        assert!(disjoint(&lens(&[2, 2]), &ShiftVector(vec![0, 3])).unwrap());
        assert!(!disjoint(&lens(&[2, 2]), &ShiftVector(vec![0, 2])).unwrap());
        assert!(disjoint(&lens(&[7]), &ShiftVector(vec![13])).unwrap());
    }

    #[test]
    fn index_set_is_one_point_shorter() {
        // [0,2) and [2,4) as index sets do not meet; as closed intervals they do.
        let l = lens(&[2, 2]);
        let s = ShiftVector(vec![0, 2]);
        assert!(disjoint_with(&l, &s, Overlap::IndexSet).unwrap());
        assert!(!disjoint_with(&l, &s, Overlap::Closed).unwrap());
        assert!(!disjoint_with(&l, &ShiftVector(vec![0, 1]), Overlap::IndexSet).unwrap());
    }

    #[test]
    fn arity_mismatch_is_usage_error() {
        let err = disjoint(&lens(&[2, 2]), &ShiftVector(vec![0])).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn parse_lengths() {
        assert_eq!("2, 3,4".parse::<SegmentLengths>().unwrap(), lens(&[2, 3, 4]));
        assert!("".parse::<SegmentLengths>().is_err());
        assert!("2,x".parse::<SegmentLengths>().is_err());
        assert_eq!(lens(&[2, 3]).to_string(), "2,3");
    }

    #[test]
    fn shift_distribution() {
        let mut rng = RandomStream::new(3);
        let n = 1_000_000u64;
        let mut zeros = 0u64;
        let mut at_least_3 = 0u64;
        let mut sum = 0u64;
        for _ in 0..n {
            let k = sample_shift(&mut rng);
            zeros += (k == 0) as u64;
            at_least_3 += (k >= 3) as u64;
            sum += k;
        }
        let nf = n as f64;
        let p0 = zeros as f64 / nf;
        assert!((p0 - 0.5).abs() < 3.0 * (0.25 / nf).sqrt());
        let p3 = at_least_3 as f64 / nf;
        assert!((p3 - 0.125).abs() < 3.0 * (0.125 * 0.875 / nf).sqrt());
        // Mean 1, variance sum k^2 2^-(k+1) - 1 = 3 - 1 = 2.
        let mean = sum as f64 / nf;
        assert!((mean - 1.0).abs() < 3.0 * (2.0 / nf).sqrt());
    }

    proptest! {
        #[test]
        fn invariant_under_joint_permutation(
            pairs in proptest::collection::vec((0usize..6, 0u64..12), 1..6),
            rot in 0usize..6,
        ) {
            let (l, s): (Vec<_>, Vec<_>) = pairs.iter().copied().unzip();
            let base = disjoint(&lens(&l), &ShiftVector(s.clone())).unwrap();
            let mut idx: Vec<usize> = (0..l.len()).collect();
            idx.rotate_left(rot % l.len());
            idx.reverse();
            let l2: Vec<_> = idx.iter().map(|&i| l[i]).collect();
            let s2: Vec<_> = idx.iter().map(|&i| s[i]).collect();
            prop_assert_eq!(base, disjoint(&lens(&l2), &ShiftVector(s2)).unwrap());
        }
    }
}
