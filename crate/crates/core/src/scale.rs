//! The 1..9 pairwise intensity scale and the judgment value type.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// Verbal labels for intensities 1..=9, indexed by `intensity - 1`.
pub const INTENSITY_LABELS: [&str; 9] = [
    "Equally preferred",
    "Equally to moderately preferred",
    "Moderately preferred",
    "Moderately to strongly preferred",
    "Strongly preferred",
    "Strongly to very strongly preferred",
    "Very strongly preferred",
    "Very strongly to extremely preferred",
    "Extremely preferred",
];

const SCALE_REL_TOL: f64 = 1e-9;

/// Which judgment values a matrix accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ScaleMode {
    /// Only 1..=9 and their reciprocals.
    #[serde(rename = "saaty-9")]
    Strict,
    /// Any positive finite value; off-scale values surface as warnings.
    #[default]
    #[serde(rename = "relaxed")]
    Relaxed,
}

impl ScaleMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScaleMode::Strict => "saaty-9",
            ScaleMode::Relaxed => "relaxed",
        }
    }
}

/// Label for an on-scale intensity, `None` for off-scale values.
///
/// Reciprocals map to the same label as their integer counterpart.
pub fn intensity_label(value: f64) -> Option<&'static str> {
    scale_step(value).map(|k| INTENSITY_LABELS[k as usize - 1])
}

/// Returns `k` when `value` is `k` or `1/k` for some `k` in 1..=9.
pub fn scale_step(value: f64) -> Option<u8> {
    if !(value.is_finite() && value > 0.0) {
        return None;
    }
    let v = if value >= 1.0 { value } else { 1.0 / value };
    let k = v.round();
    if (1.0..=9.0).contains(&k) && ((v - k) / k).abs() <= SCALE_REL_TOL {
        Some(k as u8)
    } else {
        None
    }
}

pub fn is_on_scale(value: f64) -> bool {
    scale_step(value).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid judgment value {input:?}: {reason}")]
pub struct ParseValueError {
    pub input: String,
    pub reason: &'static str,
}

/// A positive preference intensity as written in a document.
///
/// Parses plain numbers (`9`, `0.25`) and fractions (`"1/7"`). Values that are
/// exactly `1/k` for `k` in 2..=9 serialize back as fraction strings so a
/// document survives a load/save cycle unchanged.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct JudgmentValue(pub f64);

impl JudgmentValue {
    pub fn get(self) -> f64 {
        self.0
    }

    fn reciprocal_denominator(self) -> Option<u8> {
        (2u8..=9).find(|&k| 1.0 / f64::from(k) == self.0)
    }
}

impl From<f64> for JudgmentValue {
    fn from(v: f64) -> Self {
        JudgmentValue(v)
    }
}

impl FromStr for JudgmentValue {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseValueError {
            input: s.to_string(),
            reason,
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(err("empty"));
        }
        let value = match t.split_once('/') {
            Some((num, den)) => {
                let num: f64 = num.trim().parse().map_err(|_| err("bad numerator"))?;
                let den: f64 = den.trim().parse().map_err(|_| err("bad denominator"))?;
                if den == 0.0 {
                    return Err(err("zero denominator"));
                }
                num / den
            }
            None => t.parse().map_err(|_| err("not a number"))?,
        };
        if !value.is_finite() {
            return Err(err("not finite"));
        }
        if value <= 0.0 {
            return Err(err("must be positive"));
        }
        Ok(JudgmentValue(value))
    }
}

impl fmt::Display for JudgmentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reciprocal_denominator() {
            Some(k) => write!(f, "1/{k}"),
            None => write!(f, "{}", self.0),
        }
    }
}

impl Serialize for JudgmentValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.reciprocal_denominator() {
            Some(k) => serializer.serialize_str(&format!("1/{k}")),
            None if self.0.fract() == 0.0 && self.0.abs() < 9.0e15 => {
                serializer.serialize_i64(self.0 as i64)
            }
            None => serializer.serialize_f64(self.0),
        }
    }
}

impl<'de> Deserialize<'de> for JudgmentValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl de::Visitor<'_> for Visitor {
            type Value = JudgmentValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a fraction string such as \"1/7\"")
            }

            // Positivity is a matrix invariant, checked where the matrix is built,
            // so numeric inputs pass through unfiltered here.
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<JudgmentValue, E> {
                Ok(JudgmentValue(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JudgmentValue, E> {
                Ok(JudgmentValue(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JudgmentValue, E> {
                Ok(JudgmentValue(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<JudgmentValue, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}
