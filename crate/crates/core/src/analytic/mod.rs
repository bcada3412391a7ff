//! Exact-rational closed forms for window growth, the shift process, and
//! the combined bug-manifestation probabilities.
//!
//! Everything here is computed in arbitrary-precision rationals. Infinite
//! sums are evaluated through closed-form geometric tails, never by
//! numeric truncation.

mod disjoint;
mod threads;
mod tso;
mod window;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use disjoint::{disjoint_probability, disjoint_probability_capped, shift_constant, MAX_SYM_THREADS};
pub use threads::{
    identical_marginal_pr_a, identical_marginal_pr_a_f64, sc_exponent_ratio, sc_pr_a, two_thread_pr_a,
    TwoThreadValue,
};
pub use tso::{
    bottom_store_closed_form, bottom_store_limit, bottom_store_prob, h_mu, missing_mass, partition_count,
    pr_f_exact, pr_f_lower, pr_l_lower, pr_psi,
};
pub use window::{window_law, window_pmf, window_pmf_bounds, GeometricTerm, WindowLaw};

/// An exact rational in canonical reduced form with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactValue(BigRational);

impl ExactValue {
    pub fn new(numer: i64, denom: i64) -> Self {
        ExactValue(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn integer(v: i64) -> Self {
        Self::new(v, 1)
    }

    pub fn zero() -> Self {
        ExactValue(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactValue(BigRational::one())
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u64) -> Self {
        ExactValue(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    /// `2^k`.
    pub fn pow2(k: u64) -> Self {
        ExactValue(BigRational::from_integer(BigInt::one() << k))
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        ExactValue(BigRational::from_integer(BigInt::from(v.clone())))
    }

    /// Exact binary value of a finite float.
    pub fn from_f64(v: f64) -> Result<Self> {
        BigRational::from_float(v)
            .map(ExactValue)
            .ok_or_else(|| Error::Usage(format!("{v} is not a finite number")))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn pow(&self, k: u32) -> Self {
        ExactValue(num::traits::Pow::pow(&self.0, k))
    }

    pub fn recip(&self) -> Self {
        ExactValue(self.0.recip())
    }

    /// Nearest `f64`; underflows to zero for extremely small values.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `log2` of a positive value, accurate even when the value is far
    /// outside `f64` range.
    pub fn log2(&self) -> f64 {
        assert!(self.0.is_positive(), "log2 of a non-positive value");
        log2_big(self.numer().magnitude()) - log2_big(self.denom().magnitude())
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a ExactValue>) -> ExactValue {
        items.into_iter().fold(Self::zero(), |acc, x| acc + x)
    }
}

fn log2_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top: BigUint = v >> shift;
    top.to_f64().unwrap().log2() + shift as f64
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<BigRational> for ExactValue {
    fn from(v: BigRational) -> Self {
        ExactValue(v)
    }
}

impl From<i64> for ExactValue {
    fn from(v: i64) -> Self {
        Self::integer(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: ExactValue) -> ExactValue {
                ExactValue($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&ExactValue> for ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: &ExactValue) -> ExactValue {
                ExactValue($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<&ExactValue> for &ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: &ExactValue) -> ExactValue {
                ExactValue($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<ExactValue> for &ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: ExactValue) -> ExactValue {
                ExactValue($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue(-self.0)
    }
}

/// A quantity known only up to a closed interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedValue {
    lower: ExactValue,
    upper: ExactValue,
}

impl BoundedValue {
    pub fn new(lower: ExactValue, upper: ExactValue) -> Result<Self> {
        if lower.cmp(&upper) == Ordering::Greater {
            return Err(Error::Usage(format!("bounds out of order: {lower} > {upper}")));
        }
        Ok(BoundedValue { lower, upper })
    }

    pub fn exact(v: ExactValue) -> Self {
        BoundedValue {
            lower: v.clone(),
            upper: v,
        }
    }

    pub fn lower(&self) -> &ExactValue {
        &self.lower
    }

    pub fn upper(&self) -> &ExactValue {
        &self.upper
    }

    pub fn width(&self) -> ExactValue {
        &self.upper - &self.lower
    }

    pub fn contains(&self, v: &ExactValue) -> bool {
        &self.lower <= v && v <= &self.upper
    }

    pub fn contains_f64(&self, v: f64, slack: f64) -> bool {
        self.lower.to_f64() - slack <= v && v <= self.upper.to_f64() + slack
    }
}

/// `C(n, k)` as an exact integer.
pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_reduction() {
        assert_eq!(ExactValue::new(6, 36).to_string(), "1/6");
        assert_eq!(ExactValue::new(3, -6).to_string(), "-1/2");
        assert_eq!(ExactValue::integer(1).to_string(), "1/1");
        assert_eq!(
            serde_json::to_string(&ExactValue::new(7, 54)).unwrap(),
            "\"7/54\""
        );
    }

    #[test]
    fn arithmetic() {
        let a = ExactValue::new(1, 3);
        let b = ExactValue::new(4, 7);
        assert_eq!(&a + &b + ExactValue::new(2, 21), ExactValue::one());
        assert_eq!(ExactValue::pow2_neg(3), ExactValue::new(1, 8));
        assert_eq!(ExactValue::pow2(3).recip(), ExactValue::new(1, 8));
    }

    #[test]
    fn log2_far_outside_f64() {
        let tiny = ExactValue::pow2_neg(5000) * ExactValue::new(3, 1);
        assert!((tiny.log2() - (3f64.log2() - 5000.0)).abs() < 1e-9);
        assert_eq!(tiny.to_f64(), 0.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(factorial(5), BigUint::from(120u32));
    }

    #[test]
    fn bounded_rejects_inverted() {
        assert!(BoundedValue::new(ExactValue::one(), ExactValue::zero()).is_err());
        let b = BoundedValue::new(ExactValue::new(1, 4), ExactValue::new(1, 2)).unwrap();
        assert!(b.contains(&ExactValue::new(1, 3)));
        assert!(!b.contains(&ExactValue::new(2, 3)));
        assert_eq!(b.width(), ExactValue::new(1, 4));
    }
}
