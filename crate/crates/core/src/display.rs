//! Display rounding shared by reports, the CLI and the service.
//!
//! Weights and scores are shown to 3 decimals, λmax/CI/CR to 4. Computation
//! always uses full precision; these only format.

use crate::scale::JudgmentValue;

pub fn weight(x: f64) -> String {
    format!("{x:.3}")
}

pub fn percent(x: f64) -> String {
    format!("{:.1}%", x * 100.0)
}

pub fn index(x: f64) -> String {
    format!("{x:.4}")
}

pub fn score(x: f64) -> String {
    format!("{x:.3}")
}

/// Matrix entry: integers and `1/k` as written, everything else to 3 decimals.
pub fn entry(x: f64) -> String {
    let s = JudgmentValue(x).to_string();
    if s.starts_with("1/") || x.fract() == 0.0 {
        s
    } else {
        format!("{x:.3}")
    }
}

pub fn verdict(consistent: bool) -> &'static str {
    if consistent {
        "consistent"
    } else {
        "inconsistent"
    }
}
