//! Factor-rating evaluation: weighted sums of 0..10 leaf ratings, rankings,
//! per-criterion breakdowns and what-if re-scoring.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hierarchy::{CriterionNode, WeightTable};

pub const MAX_RATING: i64 = 10;

/// Labels for ratings 0..=10.
pub const RATING_LABELS: [&str; 11] = [
    "Worst",
    "Very poor",
    "Poor",
    "Significantly below Avg.",
    "Below Avg.",
    "Avg.",
    "Above Avg.",
    "Significantly above Avg.",
    "Good",
    "Very Good",
    "Best",
];

/// Identifies the ordering rule applied by [`rank`].
pub const ORDERING_RULE: &str = "total-desc,id-asc";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatingError {
    #[error("alternative {alternative:?} is missing ratings for {leaves:?}")]
    MissingRatings {
        alternative: String,
        leaves: Vec<String>,
    },
    #[error("alternative {alternative:?} rates {leaf:?} as {rating}; ratings must be 0..=10")]
    OutOfRange {
        alternative: String,
        leaf: String,
        rating: i64,
    },
    #[error("alternative {alternative:?} rates unknown criterion {leaf:?}")]
    UnknownLeaf { alternative: String, leaf: String },
    #[error("alternative {0:?} has more than one rating sheet")]
    DuplicateAlternative(String),
    #[error("no rating sheets to rank")]
    Empty,
    #[error("what-if override targets unknown alternative {0:?}")]
    UnknownAlternative(String),
    #[error("what-if override targets unknown criterion {0:?}")]
    UnknownOverrideLeaf(String),
}

/// One alternative's 0..10 rating for every leaf criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingSheet {
    pub alternative_id: String,
    pub ratings: BTreeMap<String, i64>,
}

impl RatingSheet {
    pub fn new(alternative_id: impl Into<String>) -> Self {
        RatingSheet {
            alternative_id: alternative_id.into(),
            ratings: BTreeMap::new(),
        }
    }

    pub fn with(mut self, leaf: impl Into<String>, rating: i64) -> Self {
        self.ratings.insert(leaf.into(), rating);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafContribution {
    pub leaf_id: String,
    pub global_weight: f64,
    pub rating: i64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSubtotal {
    pub criterion_id: String,
    pub subtotal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub alternative_id: String,
    /// Leaf declaration order.
    pub contributions: Vec<LeafContribution>,
    /// Top-level criterion order.
    pub subtotals: Vec<CriterionSubtotal>,
    pub total: f64,
}

impl ScoreBreakdown {
    pub fn subtotal(&self, criterion_id: &str) -> Option<f64> {
        self.subtotals
            .iter()
            .find(|s| s.criterion_id == criterion_id)
            .map(|s| s.subtotal)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub rank: usize,
    pub alternative_id: String,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedResult {
    pub ordering: String,
    pub entries: Vec<RankedEntry>,
    /// Same order as `entries`.
    pub breakdowns: Vec<ScoreBreakdown>,
}

impl RankedResult {
    pub fn order(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.alternative_id.as_str()).collect()
    }

    pub fn total_of(&self, alternative: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.alternative_id == alternative)
            .map(|e| e.total)
    }

    pub fn rank_of(&self, alternative: &str) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.alternative_id == alternative)
            .map(|e| e.rank)
    }

    pub fn breakdown(&self, alternative: &str) -> Option<&ScoreBreakdown> {
        self.breakdowns.iter().find(|b| b.alternative_id == alternative)
    }
}

/// Σ over leaves of unrounded global weight × rating.
pub fn score_alternative(sheet: &RatingSheet, table: &WeightTable) -> Result<ScoreBreakdown, RatingError> {
    let alt = &sheet.alternative_id;
    for leaf in sheet.ratings.keys() {
        if !table.leaves().any(|n| &n.id == leaf) {
            return Err(RatingError::UnknownLeaf {
                alternative: alt.clone(),
                leaf: leaf.clone(),
            });
        }
    }
    let missing: Vec<String> = table
        .leaves()
        .filter(|n| !sheet.ratings.contains_key(&n.id))
        .map(|n| n.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(RatingError::MissingRatings {
            alternative: alt.clone(),
            leaves: missing,
        });
    }

    let mut contributions = Vec::new();
    let mut subtotals: Vec<CriterionSubtotal> = table
        .nodes
        .iter()
        .filter(|n| n.depth == 1)
        .map(|n| CriterionSubtotal {
            criterion_id: n.id.clone(),
            subtotal: 0.0,
        })
        .collect();
    for leaf in table.leaves() {
        let rating = sheet.ratings[&leaf.id];
        if !(0..=MAX_RATING).contains(&rating) {
            return Err(RatingError::OutOfRange {
                alternative: alt.clone(),
                leaf: leaf.id.clone(),
                rating,
            });
        }
        let contribution = leaf.global_weight * rating as f64;
        if let Some(top) = &leaf.top_criterion {
            if let Some(s) = subtotals.iter_mut().find(|s| &s.criterion_id == top) {
                s.subtotal += contribution;
            }
        }
        contributions.push(LeafContribution {
            leaf_id: leaf.id.clone(),
            global_weight: leaf.global_weight,
            rating,
            contribution,
        });
    }
    let total = contributions.iter().map(|c| c.contribution).sum();
    Ok(ScoreBreakdown {
        alternative_id: alt.clone(),
        contributions,
        subtotals,
        total,
    })
}

/// Scores every sheet and orders by total descending, then id ascending.
pub fn rank(sheets: &[RatingSheet], table: &WeightTable) -> Result<RankedResult, RatingError> {
    if sheets.is_empty() {
        return Err(RatingError::Empty);
    }
    for (i, s) in sheets.iter().enumerate() {
        if sheets[..i].iter().any(|p| p.alternative_id == s.alternative_id) {
            return Err(RatingError::DuplicateAlternative(s.alternative_id.clone()));
        }
    }
    let mut breakdowns = sheets
        .iter()
        .map(|s| score_alternative(s, table))
        .collect::<Result<Vec<_>, _>>()?;
    breakdowns.sort_by(|a, b| {
        b.total
            .total_cmp(&a.total)
            .then_with(|| a.alternative_id.cmp(&b.alternative_id))
    });
    let entries = breakdowns
        .iter()
        .enumerate()
        .map(|(i, b)| RankedEntry {
            rank: i + 1,
            alternative_id: b.alternative_id.clone(),
            total: b.total,
        })
        .collect();
    Ok(RankedResult {
        ordering: ORDERING_RULE.to_string(),
        entries,
        breakdowns,
    })
}

/// Subtotals per alternative and top-level criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionBreakdown {
    pub criteria: Vec<String>,
    /// Ranking order.
    pub rows: Vec<CriterionBreakdownRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionBreakdownRow {
    pub alternative_id: String,
    /// Aligned with `CriterionBreakdown::criteria`.
    pub subtotals: Vec<f64>,
    pub total: f64,
}

impl CriterionBreakdown {
    pub fn get(&self, alternative: &str, criterion: &str) -> Option<f64> {
        let col = self.criteria.iter().position(|c| c == criterion)?;
        self.rows
            .iter()
            .find(|r| r.alternative_id == alternative)
            .map(|r| r.subtotals[col])
    }
}

/// Sums leaf contributions beneath each child of `root` by walking the tree.
pub fn breakdown_by_criterion(result: &RankedResult, root: &CriterionNode) -> CriterionBreakdown {
    let criteria: Vec<String> = root.children.iter().map(|c| c.id.clone()).collect();
    let rows = result
        .breakdowns
        .iter()
        .map(|b| {
            let subtotals = root
                .children
                .iter()
                .map(|c| {
                    c.leaves()
                        .iter()
                        .filter_map(|leaf| b.contributions.iter().find(|x| x.leaf_id == leaf.id))
                        .map(|x| x.contribution)
                        .sum()
                })
                .collect();
            CriterionBreakdownRow {
                alternative_id: b.alternative_id.clone(),
                subtotals,
                total: b.total,
            }
        })
        .collect();
    CriterionBreakdown { criteria, rows }
}

/// A hypothetical rating for one (alternative, leaf) cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Override {
    pub alternative: String,
    pub leaf: String,
    pub rating: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid override {input:?}: expected ALT:LEAF=RATING ({reason})")]
pub struct ParseOverrideError {
    pub input: String,
    pub reason: &'static str,
}

impl FromStr for Override {
    type Err = ParseOverrideError;

    /// Parses `ALT:LEAF=RATING`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseOverrideError {
            input: s.to_string(),
            reason,
        };
        let (target, rating) = s.rsplit_once('=').ok_or_else(|| err("missing '='"))?;
        let (alt, leaf) = target.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let (alt, leaf) = (alt.trim(), leaf.trim());
        if alt.is_empty() || leaf.is_empty() {
            return Err(err("empty alternative or criterion"));
        }
        let rating: i64 = rating.trim().parse().map_err(|_| err("rating is not an integer"))?;
        if !(0..=MAX_RATING).contains(&rating) {
            return Err(err("rating outside 0..=10"));
        }
        Ok(Override {
            alternative: alt.to_string(),
            leaf: leaf.to_string(),
            rating,
        })
    }
}

/// Re-ranks with overrides applied to copies of the sheets.
pub fn whatif(
    sheets: &[RatingSheet],
    table: &WeightTable,
    overrides: &[Override],
) -> Result<RankedResult, RatingError> {
    let mut sheets = sheets.to_vec();
    for o in overrides {
        if !table.leaves().any(|n| n.id == o.leaf) {
            return Err(RatingError::UnknownOverrideLeaf(o.leaf.clone()));
        }
        let sheet = sheets
            .iter_mut()
            .find(|s| s.alternative_id == o.alternative)
            .ok_or_else(|| RatingError::UnknownAlternative(o.alternative.clone()))?;
        sheet.ratings.insert(o.leaf.clone(), o.rating);
    }
    rank(&sheets, table)
}
