//! Closed-form critical-window laws.

use serde::Serialize;

use super::{BoundedValue, ExactValue};
use crate::error::{Error, Result};
use crate::model::ModelName;

/// `coeff * ratio^gamma`, one geometric component of a window pmf for
/// `gamma >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometricTerm {
    pub coeff: ExactValue,
    pub ratio: ExactValue,
}

impl GeometricTerm {
    fn new(coeff: ExactValue, ratio: ExactValue) -> Self {
        GeometricTerm { coeff, ratio }
    }

    fn at(&self, gamma: u32) -> ExactValue {
        &self.coeff * self.ratio.pow(gamma)
    }

    /// `sum_{gamma >= 1} coeff * (ratio * x)^gamma`, for `|ratio * x| < 1`.
    fn tail_sum(&self, x: &ExactValue) -> ExactValue {
        let r = &self.ratio * x;
        &self.coeff * &r / (ExactValue::one() - r)
    }
}

/// A window pmf of the form `Pr[0] = at_zero`,
/// `Pr[gamma] = sum_k coeff_k * ratio_k^gamma` for `gamma >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowLaw {
    pub at_zero: ExactValue,
    pub tail: Vec<GeometricTerm>,
}

impl WindowLaw {
    pub fn pmf(&self, gamma: u32) -> ExactValue {
        if gamma == 0 {
            self.at_zero.clone()
        } else {
            self.tail
                .iter()
                .map(|t| t.at(gamma))
                .fold(ExactValue::zero(), |a, b| a + b)
        }
    }

    /// Total mass over all `gamma >= 0`.
    pub fn total_mass(&self) -> ExactValue {
        self.geometric_moment(&ExactValue::one())
    }

    /// `E[x^gamma] = sum_gamma x^gamma Pr[gamma]`, in closed form.
    pub fn geometric_moment(&self, x: &ExactValue) -> ExactValue {
        self.tail
            .iter()
            .fold(self.at_zero.clone(), |acc, t| acc + t.tail_sum(x))
    }

    /// `E[2^-segment_length]`, with `segment_length = gamma + 2`.
    pub fn expected_inverse_pow2_segment(&self) -> ExactValue {
        ExactValue::new(1, 4) * self.geometric_moment(&ExactValue::new(1, 2))
    }
}

/// The TSO lower-bound coefficient on `4^-gamma`.
fn tso_main_term() -> GeometricTerm {
    GeometricTerm::new(ExactValue::new(6, 7), ExactValue::new(1, 4))
}

/// Largest admissible correction: `R(gamma) * 2^-gamma` with
/// `R(gamma) <= 2/21`.
fn tso_slack_term() -> GeometricTerm {
    GeometricTerm::new(ExactValue::new(2, 21), ExactValue::new(1, 2))
}

/// Closed-form window law for `model`. TSO yields two laws (lower and
/// upper envelope), every other supported model yields one exact law.
pub fn window_law(model: ModelName) -> Result<(WindowLaw, WindowLaw)> {
    let two_thirds = ExactValue::new(2, 3);
    match model {
        ModelName::Sc => {
            let law = WindowLaw {
                at_zero: ExactValue::one(),
                tail: vec![],
            };
            Ok((law.clone(), law))
        }
        ModelName::Wo => {
            let law = WindowLaw {
                at_zero: two_thirds,
                tail: vec![GeometricTerm::new(ExactValue::new(1, 3), ExactValue::new(1, 2))],
            };
            Ok((law.clone(), law))
        }
        ModelName::Tso => Ok((
            WindowLaw {
                at_zero: two_thirds.clone(),
                tail: vec![tso_main_term()],
            },
            WindowLaw {
                at_zero: two_thirds,
                tail: vec![tso_main_term(), tso_slack_term()],
            },
        )),
        other => Err(Error::UnsupportedModel {
            model: other.to_string(),
            what: "no closed-form window law",
        }),
    }
}

/// Exact window pmf for SC and WO.
pub fn window_pmf(model: ModelName, gamma: u32) -> Result<ExactValue> {
    match model {
        ModelName::Sc | ModelName::Wo => Ok(window_law(model)?.0.pmf(gamma)),
        other => Err(Error::UnsupportedModel {
            model: other.to_string(),
            what: "exact window pmf exists only for sc and wo (use window_pmf_bounds for tso)",
        }),
    }
}

/// TSO window pmf envelope; exact at `gamma = 0`.
pub fn window_pmf_bounds(gamma: u32) -> BoundedValue {
    let (lo, hi) = window_law(ModelName::Tso).expect("tso has a law");
    BoundedValue::new(lo.pmf(gamma), hi.pmf(gamma)).expect("slack term is non-negative")
}
