//! Priority vectors: the column-normalized row-average method and a power
//! iteration cross-check.

use serde::{Deserialize, Serialize};

use crate::error::AhpError;
use crate::matrix::ComparisonMatrix;

/// Normalized weights over a labelled set of items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityVector {
    pub labels: Vec<String>,
    pub weights: Vec<f64>,
}

impl PriorityVector {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight_of(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.weights[i])
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Column-normalize, then average each row.
pub fn derive_priorities(m: &ComparisonMatrix) -> PriorityVector {
    let n = m.order() as f64;
    let weights = m
        .normalized()
        .iter()
        .map(|row| row.iter().sum::<f64>() / n)
        .collect();
    PriorityVector {
        labels: m.labels().to_vec(),
        weights,
    }
}

/// Mean over rows of `(A·x)_i / x_i`.
pub fn lambda_max(m: &ComparisonMatrix, x: &PriorityVector) -> Result<f64, AhpError> {
    if x.len() != m.order() {
        return Err(AhpError::DimensionMismatch {
            matrix: m.order(),
            vector: x.len(),
        });
    }
    if let Some(index) = x.weights.iter().position(|&w| w <= 0.0) {
        return Err(AhpError::DegeneratePriority { index });
    }
    Ok(rayleigh_mean(m, &x.weights))
}

fn rayleigh_mean(m: &ComparisonMatrix, x: &[f64]) -> f64 {
    let ax = m.mul_vec(x);
    ax.iter().zip(x).map(|(a, w)| a / w).sum::<f64>() / x.len() as f64
}

/// Power iteration from the uniform vector, normalizing to unit sum each step.
///
/// Stops once successive iterates differ by less than `tol` in max norm and
/// returns the final iterate with its ratio-mean eigenvalue estimate.
pub fn principal_eigenvector(
    m: &ComparisonMatrix,
    tol: f64,
    max_iterations: usize,
) -> Result<(PriorityVector, f64), AhpError> {
    let n = m.order();
    let mut v = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iterations {
        let mut next = m.mul_vec(&v);
        let s: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= s);
        residual = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = next;
        if residual < tol {
            let lambda = rayleigh_mean(m, &v);
            let pv = PriorityVector {
                labels: m.labels().to_vec(),
                weights: v,
            };
            return Ok((pv, lambda));
        }
    }
    Err(AhpError::NoConvergence {
        iterations: max_iterations,
        residual,
    })
}
