#![allow(clippy::needless_range_loop)]

//! Positive reciprocal pairwise comparison matrices.

use serde::Serialize;

use crate::error::AhpError;
use crate::scale::{is_on_scale, ScaleMode};

/// Largest supported matrix order; the random-index table ends here.
pub const MAX_ORDER: usize = 10;

/// Relative tolerance for `a[i][j] * a[j][i] == 1`.
pub const RECIPROCITY_TOL: f64 = 1e-6;

/// One pairwise judgment: how strongly item `row` is preferred over item `col`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Judgment {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl Judgment {
    pub fn new(row: usize, col: usize, value: f64) -> Self {
        Judgment { row, col, value }
    }
}

/// A square, positive, reciprocal judgment matrix with unit diagonal.
///
/// Constructors validate every invariant, so a `ComparisonMatrix` in hand is
/// always safe to analyze.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonMatrix {
    labels: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl ComparisonMatrix {
    /// Builds a matrix from judgments covering each unordered pair exactly once.
    ///
    /// Judgments may be given in either orientation; `(j, i, v)` is stored as
    /// `(i, j, 1/v)`. The lower triangle is filled with reciprocals.
    pub fn build(
        labels: Vec<String>,
        judgments: &[Judgment],
        scale: ScaleMode,
    ) -> Result<Self, AhpError> {
        let n = labels.len();
        check_order(n)?;
        check_labels(&labels)?;

        let mut upper: Vec<Option<f64>> = vec![None; n * n];
        for j in judgments {
            if j.row >= n || j.col >= n {
                return Err(AhpError::IndexOutOfRange {
                    row: j.row,
                    col: j.col,
                    n,
                });
            }
            if j.row == j.col {
                return Err(AhpError::DiagonalJudgment(j.row));
            }
            check_entry(j.row, j.col, j.value, scale)?;
            let (r, c, v) = if j.row < j.col {
                (j.row, j.col, j.value)
            } else {
                (j.col, j.row, 1.0 / j.value)
            };
            let slot = &mut upper[r * n + c];
            if slot.is_some() {
                return Err(AhpError::ConflictingJudgment {
                    row: r,
                    col: c,
                    row_label: labels[r].clone(),
                    col_label: labels[c].clone(),
                });
            }
            *slot = Some(v);
        }

        let mut rows = vec![vec![1.0; n]; n];
        for r in 0..n {
            for c in (r + 1)..n {
                let v = upper[r * n + c].ok_or_else(|| AhpError::IncompleteJudgments {
                    row: r,
                    col: c,
                    row_label: labels[r].clone(),
                    col_label: labels[c].clone(),
                })?;
                rows[r][c] = v;
                rows[c][r] = 1.0 / v;
            }
        }
        Ok(ComparisonMatrix { labels, rows })
    }

    /// Wraps a full row-major matrix after validating it. Nothing is repaired.
    pub fn from_rows(
        labels: Vec<String>,
        rows: Vec<Vec<f64>>,
        scale: ScaleMode,
    ) -> Result<Self, AhpError> {
        let n = rows.len();
        check_order(n)?;
        if labels.len() != n {
            return Err(AhpError::LabelCount {
                expected: n,
                found: labels.len(),
            });
        }
        check_labels(&labels)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(AhpError::NotSquare {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
        }
        for i in 0..n {
            let d = rows[i][i];
            if d != 1.0 {
                return Err(AhpError::DiagonalNotOne { index: i, value: d });
            }
            for j in 0..n {
                if i != j {
                    check_entry(i, j, rows[i][j], scale)?;
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let product = rows[i][j] * rows[j][i];
                if (product - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(AhpError::NotReciprocal {
                        row: i,
                        col: j,
                        product,
                    });
                }
            }
        }
        Ok(ComparisonMatrix { labels, rows })
    }

    /// The perfectly consistent matrix `a[i][j] = w[i] / w[j]`.
    pub fn from_weights(labels: Vec<String>, weights: &[f64]) -> Result<Self, AhpError> {
        let n = weights.len();
        check_order(n)?;
        if labels.len() != n {
            return Err(AhpError::LabelCount {
                expected: n,
                found: labels.len(),
            });
        }
        check_labels(&labels)?;
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(AhpError::NonPositive {
                    row: i,
                    col: i,
                    value: w,
                });
            }
        }
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 1.0 } else { weights[i] / weights[j] })
                    .collect()
            })
            .collect();
        Ok(ComparisonMatrix { labels, rows })
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.rows[row][col]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let n = self.order();
        (0..n)
            .map(|j| self.rows.iter().map(|r| r[j]).sum())
            .collect()
    }

    /// Each entry divided by its column sum.
    pub fn normalized(&self) -> Vec<Vec<f64>> {
        let sums = self.column_sums();
        self.rows
            .iter()
            .map(|r| r.iter().zip(&sums).map(|(a, s)| a / s).collect())
            .collect()
    }

    /// `A·x` for a vector of matching length.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// The upper-triangle judgments that rebuild this matrix.
    pub fn upper_judgments(&self) -> Vec<Judgment> {
        let n = self.order();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(Judgment::new(i, j, self.rows[i][j]));
            }
        }
        out
    }

    /// Off-diagonal upper-triangle entries that are not on the 1..9 scale.
    pub fn off_scale_entries(&self) -> Vec<Judgment> {
        self.upper_judgments()
            .into_iter()
            .filter(|j| !is_on_scale(j.value))
            .collect()
    }

    /// Relabels and reorders rows and columns: item `i` of the result is item
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let rows = perm
            .iter()
            .map(|&pi| perm.iter().map(|&pj| self.rows[pi][pj]).collect())
            .collect();
        ComparisonMatrix { labels, rows }
    }
}

/// Builds an `n`-item matrix from upper-triangle judgments.
pub fn build_matrix(
    n: usize,
    labels: Vec<String>,
    judgments: &[Judgment],
    scale: ScaleMode,
) -> Result<ComparisonMatrix, AhpError> {
    if labels.len() != n {
        return Err(AhpError::LabelCount {
            expected: n,
            found: labels.len(),
        });
    }
    ComparisonMatrix::build(labels, judgments, scale)
}

fn check_order(n: usize) -> Result<(), AhpError> {
    if (2..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(AhpError::UnsupportedOrder(n))
    }
}

fn check_labels(labels: &[String]) -> Result<(), AhpError> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(AhpError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn check_entry(row: usize, col: usize, value: f64, scale: ScaleMode) -> Result<(), AhpError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(AhpError::NonPositive { row, col, value });
    }
    if scale == ScaleMode::Strict && !is_on_scale(value) {
        return Err(AhpError::OffScale { row, col, value });
    }
    Ok(())
}
