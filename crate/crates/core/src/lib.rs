//! Analytic hierarchy process for vendor evaluation.
//!
//! Pairwise comparison matrices give local priorities and a consistency
//! ratio; a criteria tree turns local priorities into global leaf weights;
//! factor ratings weighted by those leaves rank the alternatives.
//!
//! ```
//! use ahp_core::{load_model, evaluate, fixtures};
//!
//! let model = load_model(fixtures::STEEL_PIPE_API.as_bytes()).unwrap();
//! let eval = evaluate(&model, None).unwrap();
//! assert_eq!(eval.ranking.unwrap().order()[0], "A");
//! ```

pub mod consistency;
pub mod diagnostics;
pub mod display;
pub mod document;
pub mod error;
pub mod evaluate;
pub mod fixtures;
pub mod hierarchy;
pub mod matrix;
pub mod priority;
pub mod rating;
pub mod reference;
pub mod report;
pub mod scale;

pub use consistency::{analyze, ConsistencyReport, DEFAULT_THRESHOLD, RANDOM_INDEX};
pub use diagnostics::{Diagnostic, DiagnosticCode};
pub use document::{load_model, save_model, DecisionModel, MatrixSpec, ModelDocument, ModelError};
pub use error::AhpError;
pub use evaluate::{evaluate, evaluate_with, EvalError, Evaluation};
pub use hierarchy::{compute_weights, prioritize_leaves, CriterionNode, WeightTable, ROOT_ID};
pub use matrix::{ComparisonMatrix, Judgment};
pub use priority::{derive_priorities, lambda_max, principal_eigenvector, PriorityVector};
pub use rating::{rank, whatif, Override, RankedResult, RatingSheet};
pub use scale::{JudgmentValue, ScaleMode};
