use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A float written with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        // explicit exponent sign, the form serde_json writes back after parsing
        let text = format!("{:.16e}", self.0);
        let text = if text.contains("e-") { text } else { text.replacen('e', "e+", 1) };
        let raw = RawValue::from_string(text).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real(x)
    }
}

pub fn reals(xs: &[f64]) -> Vec<Real> {
    xs.iter().copied().map(Real).collect()
}

/// A value with the tolerance it is judged against.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Checked {
    pub value: Real,
    pub tolerance: Real,
    pub pass: bool,
}

impl Checked {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(value: f64, tolerance: f64) -> Self {
        Checked { value: Real(value), tolerance: Real(tolerance), pass: value <= tolerance }
    }

    /// Passes when `value ≥ 1 − tolerance`.
    pub fn near_one(value: f64, tolerance: f64) -> Self {
        Checked { value: Real(value), tolerance: Real(tolerance), pass: value >= 1.0 - tolerance }
    }
}
