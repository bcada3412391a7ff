//! Supporting quantities behind the TSO window envelope: the store-run
//! probabilities above the critical load, the interspersed-load counts, and
//! the bounded partition numbers they depend on.

use num::bigint::BigUint;
use num::traits::{One, Zero};

use super::{binomial, ExactValue};
use crate::error::{Error, Result};

/// `phi(x, y, z)`: number of multisets of `y` positive integers, each at
/// most `z`, summing to `x`.
///
/// Dynamic programming over the largest admissible part: a multiset either
/// avoids part `k` or contains it at least once, so
/// `f_k(s, j) = f_{k-1}(s, j) + f_k(s - k, j - 1)`.
pub fn partition_count(x: usize, y: usize, z: usize) -> BigUint {
    // table[s][j] holds f_k(s, j) for the current largest part k.
    let mut table = vec![vec![BigUint::zero(); y + 1]; x + 1];
    table[0][0] = BigUint::one();
    for k in 1..=z.min(x) {
        for s in k..=x {
            for j in 1..=y {
                let add = table[s - k][j - 1].clone();
                table[s][j] += add;
            }
        }
    }
    table[x][y].clone()
}

/// `Pr[Psi_mu = q] = 2^-mu 2^-q C(mu + q - 1, q)`: probability that exactly
/// `q` loads sit between the critical load and the `mu`-th lowest store.
pub fn pr_psi(mu: u32, q: u32) -> Result<ExactValue> {
    if mu == 0 {
        return Err(Error::Usage("pr_psi needs mu >= 1".into()));
    }
    let c = binomial((mu + q - 1) as u64, q as u64);
    Ok(ExactValue::from_biguint(&c) * ExactValue::pow2_neg((mu + q) as u64))
}

/// Exact probability that `q` interspersed loads all settle out of a run
/// of `mu` stores:
/// `sum_{delta=q}^{mu q} phi(delta, q, mu) / C(mu+q-1, q) * 2^-delta`.
pub fn pr_f_exact(mu: u32, q: u32) -> Result<ExactValue> {
    if mu == 0 {
        return Err(Error::Usage("pr_f_exact needs mu >= 1".into()));
    }
    let (mu, q) = (mu as usize, q as usize);
    let total = ExactValue::from_biguint(&binomial((mu + q - 1) as u64, q as u64));
    let mut acc = ExactValue::zero();
    for delta in q..=mu * q {
        let phi = partition_count(delta, q, mu);
        acc = acc + ExactValue::from_biguint(&phi) * ExactValue::pow2_neg(delta as u64);
    }
    Ok(acc / total)
}

/// Lower bound obtained from `phi >= 1` on its support:
/// `(2^-(q-1) - 2^-(mu q)) / C(mu+q-1, q)`.
pub fn pr_f_lower(mu: u32, q: u32) -> Result<ExactValue> {
    if mu == 0 || q == 0 {
        return Err(Error::Usage("pr_f_lower needs mu >= 1 and q >= 1".into()));
    }
    let num = ExactValue::pow2_neg((q - 1) as u64) - ExactValue::pow2_neg((mu * q) as u64);
    Ok(num / ExactValue::from_biguint(&binomial((mu + q - 1) as u64, q as u64)))
}

/// `h(mu) = 8/7 - (1 - 2^-(mu+1))^-1 + (2/3)(1 - 2^-(mu+2))^-1`.
pub fn h_mu(mu: u32) -> ExactValue {
    let one = ExactValue::one();
    let a = (&one - ExactValue::pow2_neg(mu as u64 + 1)).recip();
    let b = (&one - ExactValue::pow2_neg(mu as u64 + 2)).recip();
    ExactValue::new(8, 7) - a + ExactValue::new(2, 3) * b
}

/// Lower bound on the probability of exactly `mu` stores directly above
/// the critical load before it settles; exact (`1/3`) at `mu = 0`.
pub fn pr_l_lower(mu: u32) -> ExactValue {
    if mu == 0 {
        ExactValue::new(1, 3)
    } else {
        h_mu(1) * ExactValue::pow2_neg(mu as u64)
    }
}

/// Probability that the bottom instruction is a store after settling a
/// TSO body of length `i`: `X_1 = 1/2`, `X_i = 1/2 + X_{i-1}/4`.
pub fn bottom_store_prob(i: u32) -> Result<ExactValue> {
    if i == 0 {
        return Err(Error::Usage("bottom_store_prob needs i >= 1".into()));
    }
    let half = ExactValue::new(1, 2);
    let quarter = ExactValue::new(1, 4);
    let mut x = half.clone();
    for _ in 1..i {
        x = &half + &quarter * x;
    }
    Ok(x)
}

/// `2/3 + (1/4)^(i-1) (1/2 - 2/3)`.
pub fn bottom_store_closed_form(i: u32) -> Result<ExactValue> {
    if i == 0 {
        return Err(Error::Usage("bottom_store_closed_form needs i >= 1".into()));
    }
    let limit = bottom_store_limit();
    let decay = ExactValue::pow2_neg(2 * (i as u64 - 1));
    Ok(&limit + decay * (ExactValue::new(1, 2) - &limit))
}

pub fn bottom_store_limit() -> ExactValue {
    ExactValue::new(2, 3)
}

/// Probability mass not covered by the `pr_l_lower` bounds:
/// `1 - 1/3 - sum_{mu >= 1} h(1) 2^-mu`, the tail summed in closed form.
pub fn missing_mass() -> ExactValue {
    // sum_{mu >= 1} 2^-mu = 1
    let covered_tail = h_mu(1) * ExactValue::one();
    ExactValue::one() - pr_l_lower(0) - covered_tail
}
