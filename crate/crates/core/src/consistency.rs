//! Consistency index, random index lookup and consistency ratio.

use serde::{Deserialize, Serialize};

use crate::error::AhpError;
use crate::matrix::{ComparisonMatrix, MAX_ORDER};
use crate::priority::{derive_priorities, lambda_max, PriorityVector};

/// Judgments are acceptable when the ratio is strictly below this.
pub const DEFAULT_THRESHOLD: f64 = 0.1;

/// Mean consistency index of random reciprocal matrices, orders 1..=10.
pub const RANDOM_INDEX: [f64; MAX_ORDER] = [0.00, 0.00, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub n: usize,
    pub lambda_max: f64,
    pub ci: f64,
    pub ri: f64,
    pub cr: f64,
    pub threshold: f64,
    pub consistent: bool,
}

/// `(λmax − n) / (n − 1)`, unclamped.
pub fn consistency_index(lambda: f64, n: usize) -> Result<f64, AhpError> {
    if n < 2 {
        return Err(AhpError::UndefinedIndex(n));
    }
    Ok((lambda - n as f64) / (n as f64 - 1.0))
}

pub fn random_index(n: usize) -> Result<f64, AhpError> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(RANDOM_INDEX[n - 1])
    } else {
        Err(AhpError::UnsupportedOrder(n))
    }
}

/// Returns `(cr, consistent)`.
///
/// Negative `ci` (floating noise on near-consistent matrices) counts as 0, and
/// a zero random index (orders 1 and 2) gives `cr = 0`.
pub fn consistency_ratio(ci: f64, ri: f64, threshold: f64) -> (f64, bool) {
    let ci = ci.max(0.0);
    let cr = if ri > 0.0 { ci / ri } else { 0.0 };
    (cr, cr < threshold)
}

/// Priorities plus the full consistency report for one matrix.
pub fn analyze(
    m: &ComparisonMatrix,
    threshold: f64,
) -> Result<(PriorityVector, ConsistencyReport), AhpError> {
    let n = m.order();
    let priorities = derive_priorities(m);
    let lambda = lambda_max(m, &priorities)?;
    let ci = consistency_index(lambda, n)?.max(0.0);
    let ri = random_index(n)?;
    let (cr, consistent) = consistency_ratio(ci, ri, threshold);
    let report = ConsistencyReport {
        n,
        lambda_max: lambda,
        ci,
        ri,
        cr,
        threshold,
        consistent,
    };
    Ok((priorities, report))
}
