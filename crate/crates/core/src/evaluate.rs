use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::document::DecisionModel;
use crate::hierarchy::{compute_weights, prioritize_leaves, HierarchyError, WeightTable};
use crate::rating::{breakdown_by_criterion, rank, whatif, CriterionBreakdown, Override, RankedResult, RatingError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Rating(#[from] RatingError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrioritizedLeaf {
    pub rank: usize,
    pub id: String,
    pub name: String,
    pub global_weight: f64,
}

/// Everything computed from one model: weights, leaf priorities and, when
/// the model has rating sheets, the ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub threshold: f64,
    pub weights: WeightTable,
    pub priorities: Vec<PrioritizedLeaf>,
    pub ranking: Option<RankedResult>,
    pub criterion_breakdown: Option<CriterionBreakdown>,
}

impl Evaluation {
    pub fn all_consistent(&self) -> bool {
        self.weights.all_consistent()
    }
}

/// Runs the whole pipeline. `threshold` overrides the document's value.
pub fn evaluate(model: &DecisionModel, threshold: Option<f64>) -> Result<Evaluation, EvalError> {
    evaluate_with(model, threshold, &[])
}

/// Like [`evaluate`], with what-if overrides applied to the ranking only.
pub fn evaluate_with(
    model: &DecisionModel,
    threshold: Option<f64>,
    overrides: &[Override],
) -> Result<Evaluation, EvalError> {
    let threshold = threshold.unwrap_or(model.document.threshold);
    let weights = compute_weights(&model.root, threshold)?;
    let priorities = prioritize_leaves(&weights)
        .into_iter()
        .enumerate()
        .map(|(i, (id, global_weight))| PrioritizedLeaf {
            rank: i + 1,
            name: weights.node(&id).map(|n| n.name.clone()).unwrap_or_default(),
            id,
            global_weight,
        })
        .collect();
    let ranking = if model.sheets.is_empty() {
        if overrides.is_empty() {
            None
        } else {
            return Err(RatingError::UnknownAlternative(overrides[0].alternative.clone()).into());
        }
    } else if overrides.is_empty() {
        Some(rank(&model.sheets, &weights)?)
    } else {
        Some(whatif(&model.sheets, &weights, overrides)?)
    };
    let criterion_breakdown = ranking.as_ref().map(|r| breakdown_by_criterion(r, &model.root));
    Ok(Evaluation {
        threshold,
        weights,
        priorities,
        ranking,
        criterion_breakdown,
    })
}
