use thiserror::Error;

/// Errors from matrix construction and priority/consistency analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AhpError {
    #[error("matrix order {0} is outside the supported range 2..=10")]
    UnsupportedOrder(usize),

    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("missing judgment for pair ({row_label}, {col_label})")]
    IncompleteJudgments {
        row: usize,
        col: usize,
        row_label: String,
        col_label: String,
    },

    #[error("pair ({row_label}, {col_label}) is judged more than once")]
    ConflictingJudgment {
        row: usize,
        col: usize,
        row_label: String,
        col_label: String,
    },

    #[error("judgment index ({row}, {col}) is out of range for order {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },

    #[error("judgment on the diagonal at index {0}")]
    DiagonalJudgment(usize),

    #[error("entry ({row}, {col}) = {value} is not a positive finite number")]
    NonPositive { row: usize, col: usize, value: f64 },

    #[error("entry ({row}, {col}) = {value} is not on the 1..9 scale or its reciprocals")]
    OffScale { row: usize, col: usize, value: f64 },

    #[error("diagonal entry {index} is {value}, expected 1")]
    DiagonalNotOne { index: usize, value: f64 },

    #[error("entries ({row}, {col}) and ({col}, {row}) are not reciprocal (product {product})")]
    NotReciprocal { row: usize, col: usize, product: f64 },

    #[error("priority weight {index} is zero")]
    DegeneratePriority { index: usize },

    #[error("dimension mismatch: matrix order {matrix}, vector length {vector}")]
    DimensionMismatch { matrix: usize, vector: usize },

    #[error("consistency index is undefined for order {0}")]
    UndefinedIndex(usize),

    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}
