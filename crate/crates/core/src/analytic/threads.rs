//! Combined settling + shift results: two-thread values, the
//! identical-marginal form, and the SC closed form with its exponent.

use serde::Serialize;

use super::{factorial, shift_constant, window_law, BoundedValue, ExactValue};
use crate::error::{Error, Result};
use crate::model::ModelName;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum TwoThreadValue {
    Exact(ExactValue),
    Bounded(BoundedValue),
}

/// `Pr[A]` for two threads: `(2/3) E[2^-Gamma]` with `Gamma` the segment
/// length of one thread. SC and WO are exact; TSO is returned as its
/// envelope.
pub fn two_thread_pr_a(model: ModelName) -> Result<TwoThreadValue> {
    let two_thirds = ExactValue::new(2, 3);
    match model {
        ModelName::Sc | ModelName::Wo => {
            let (law, _) = window_law(model)?;
            Ok(TwoThreadValue::Exact(
                two_thirds * law.expected_inverse_pow2_segment(),
            ))
        }
        ModelName::Tso => {
            let (lo, hi) = window_law(model)?;
            Ok(TwoThreadValue::Bounded(BoundedValue::new(
                &two_thirds * lo.expected_inverse_pow2_segment(),
                &two_thirds * hi.expected_inverse_pow2_segment(),
            )?))
        }
        other => Err(Error::UnsupportedModel {
            model: other.to_string(),
            what: "two-thread closed form exists only for sc, wo and tso",
        }),
    }
}

fn identical_prefactor(n: usize) -> Result<ExactValue> {
    let c = shift_constant(n)?;
    let tri = (n * (n + 1) / 2) as u64;
    Ok(c * ExactValue::pow2_neg(tri) * ExactValue::from_biguint(&factorial(n as u64)))
}

/// `c(n) 2^-C(n+1,2) n! E`, where `E = E[prod_{i=1}^{n-1} 2^-(i Gamma_i)]`
/// is supplied by the caller.
pub fn identical_marginal_pr_a(n: usize, expectation: &ExactValue) -> Result<ExactValue> {
    if expectation.is_negative() || expectation > &ExactValue::one() {
        return Err(Error::Usage(format!("expectation {expectation} outside [0, 1]")));
    }
    Ok(identical_prefactor(n)? * expectation)
}

/// Float variant for Monte Carlo estimated expectations.
pub fn identical_marginal_pr_a_f64(n: usize, expectation: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&expectation) {
        return Err(Error::Usage(format!("expectation {expectation} outside [0, 1]")));
    }
    Ok(identical_prefactor(n)?.to_f64() * expectation)
}

/// SC closed form `c(n) 2^-C(n+1,2) n! 2^-2 C(n,2)`: every segment has
/// length 2.
pub fn sc_pr_a(n: usize) -> Result<ExactValue> {
    let pairs = (n * n.saturating_sub(1) / 2) as u64;
    Ok(identical_prefactor(n)? * ExactValue::pow2_neg(2 * pairs))
}

/// `log2(sc_pr_a(n)) / n^2`, which tends to `-3/2`.
pub fn sc_exponent_ratio(n: usize) -> Result<f64> {
    Ok(sc_pr_a(n)?.log2() / (n * n) as f64)
}
