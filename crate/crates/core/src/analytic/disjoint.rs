//! Probability that geometrically shifted segments are mutually disjoint.

use std::collections::BTreeMap;

use num::bigint::BigUint;

use super::ExactValue;
use crate::error::{Error, Result};
use crate::shift::SegmentLengths;

/// Largest segment count for which the symmetric-group sum is enumerated.
pub const MAX_SYM_THREADS: usize = 10;

/// `prod_{i=1}^{n-1} (1 - 2^-(n+1-i)) = prod_{j=2}^{n} (1 - 2^-j)`.
fn shift_denominator(n: usize) -> ExactValue {
    (2..=n as u64).fold(ExactValue::one(), |acc, j| {
        acc * (ExactValue::one() - ExactValue::pow2_neg(j))
    })
}

/// `c(n) = 2 / prod_{j=2}^{n} (1 - 2^-j)`, which lies in `[2, 4]`.
pub fn shift_constant(n: usize) -> Result<ExactValue> {
    if n < 2 {
        return Err(Error::Usage(format!("c(n) needs n >= 2, got {n}")));
    }
    Ok(ExactValue::integer(2) / shift_denominator(n))
}

pub fn disjoint_probability(lengths: &SegmentLengths) -> Result<ExactValue> {
    disjoint_probability_capped(lengths, MAX_SYM_THREADS)
}

/// Exact `Pr[A(lengths)]`:
///
/// ```text
/// 2^-(C(n+1,2) - 1) / prod_{i=1}^{n-1} (1 - 2^-(n+1-i))
///     * sum_{sigma in Sym_n} prod_{i=1}^{n-1} 2^-((n-i) * len_{sigma(i)})
/// ```
///
/// The sum has `n!` terms; `max_threads` bounds `n`.
pub fn disjoint_probability_capped(lengths: &SegmentLengths, max_threads: usize) -> Result<ExactValue> {
    let n = lengths.len();
    if n > max_threads {
        return Err(Error::ResourceGuard(format!(
            "{n} segments means {n}! permutation terms (limit {max_threads}); \
             use Monte Carlo or the identical-marginal form instead"
        )));
    }
    if n == 1 {
        return Ok(ExactValue::one());
    }
    // Each permutation term is a power of two, so tally terms by exponent.
    let mut by_exponent: BTreeMap<u64, u64> = BTreeMap::new();
    let lens: Vec<u64> = lengths.as_slice().iter().map(|&l| l as u64).collect();
    for_each_permutation(n, |perm| {
        let e: u64 = perm[..n - 1]
            .iter()
            .enumerate()
            .map(|(i, &s)| (n - 1 - i) as u64 * lens[s])
            .sum();
        *by_exponent.entry(e).or_default() += 1;
    });
    let sum = by_exponent.iter().fold(ExactValue::zero(), |acc, (&e, &count)| {
        acc + ExactValue::from_biguint(&BigUint::from(count)) * ExactValue::pow2_neg(e)
    });
    let tri = (n * (n + 1) / 2) as u64;
    Ok(ExactValue::pow2_neg(tri - 1) / shift_denominator(n) * sum)
}

/// Visits every permutation of `0..n` (Heap's algorithm, iterative).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn lens(v: &[usize]) -> SegmentLengths {
        SegmentLengths::new(v.to_vec()).unwrap()
    }

    #[test]
    fn heap_enumerates_each_permutation_once() {
        for n in 1..=6 {
            let mut seen = HashSet::new();
            for_each_permutation(n, |p| {
                assert!(seen.insert(p.to_vec()));
            });
            assert_eq!(seen.len(), (1..=n).product::<usize>());
        }
    }

    #[test]
    fn examples() {
        assert_eq!(
            disjoint_probability(&lens(&[2, 2])).unwrap(),
            ExactValue::new(1, 6)
        );
        assert_eq!(
            disjoint_probability(&lens(&[2, 2, 2])).unwrap(),
            ExactValue::new(1, 224)
        );
        assert_eq!(disjoint_probability(&lens(&[5])).unwrap(), ExactValue::one());
    }

    #[test]
    fn two_segment_form() {
        // Pr[A] = (2^-a + 2^-b) / 3 for n = 2.
        for a in 0..6 {
            for b in 0..6 {
                let want = (ExactValue::pow2_neg(a) + ExactValue::pow2_neg(b)) / ExactValue::integer(3);
                assert_eq!(
                    disjoint_probability(&lens(&[a as usize, b as usize])).unwrap(),
                    want
                );
            }
        }
    }

    #[test]
    fn guard() {
        let err = disjoint_probability(&lens(&[2; 11])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn shift_constants() {
        assert_eq!(shift_constant(2).unwrap(), ExactValue::new(8, 3));
        assert_eq!(shift_constant(3).unwrap(), ExactValue::new(64, 21));
        let (two, four) = (ExactValue::integer(2), ExactValue::integer(4));
        for n in 2..=32 {
            let c = shift_constant(n).unwrap();
            assert!(c >= two && c <= four, "c({n}) = {c}");
        }
        assert!(shift_constant(1).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn permutation_invariant(v in proptest::collection::vec(0usize..8, 1..6), k in 0usize..6) {
            let base = disjoint_probability(&lens(&v)).unwrap();
            let mut w = v.clone();
            w.rotate_left(k % v.len());
            w.reverse();
            prop_assert_eq!(base, disjoint_probability(&lens(&w)).unwrap());
        }

        #[test]
        fn monotone_in_lengths(v in proptest::collection::vec(0usize..8, 2..6), i in 0usize..6) {
            let base = disjoint_probability(&lens(&v)).unwrap();
            let mut w = v.clone();
            let i = i % v.len();
            w[i] += 1;
            prop_assert!(disjoint_probability(&lens(&w)).unwrap() <= base);
        }
    }
}
