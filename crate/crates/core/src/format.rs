//! Deterministic number rendering for machine-readable output.

use std::str::FromStr;

use serde::Serializer;
use serde_json::{Number, Value};

/// Renders `x` with 12 significant digits in plain decimal notation.
pub fn float12(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(1) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.99.. -> 10.0..).
    let rounded: f64 = s.parse().unwrap_or(x);
    let exponent2 = rounded.abs().log10().floor() as i32;
    if exponent2 != exponent {
        let decimals = (11 - exponent2).max(1) as usize;
        return format!("{x:.decimals$}");
    }
    s
}

/// JSON number carrying the [`float12`] rendering verbatim; non-finite
/// values become `null`.
pub fn json_float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&float12(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn serialize_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&json_float(*x), s)
}

pub fn serialize_f64_pair<S: Serializer>(x: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&[json_float(x.0), json_float(x.1)], s)
}
