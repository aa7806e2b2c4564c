//! Reference values carried by a model document, and the checks that
//! compare an evaluation against them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::display::verdict;
use crate::document::DecisionModel;
use crate::evaluate::Evaluation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub value: f64,
    pub tol: f64,
}

impl Expected {
    pub fn accepts(&self, actual: f64) -> bool {
        (actual - self.value).abs() <= self.tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsExpectation {
    /// In child declaration order.
    pub values: Vec<f64>,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsistencyExpectation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<Expected>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci: Option<Expected>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cr: Option<Expected>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapExpectation {
    pub values: BTreeMap<String, f64>,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Values a model is expected to reproduce, each with its tolerance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    /// Keyed by internal node id.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub local_weights: BTreeMap<String, WeightsExpectation>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub consistency: BTreeMap<String, ConsistencyExpectation>,
    /// Keyed by leaf id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global_weights: Option<MapExpectation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf_sum: Option<Expected>,
    /// Expected prefix of the prioritized leaf list.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub top_priorities: Vec<String>,
    /// Keyed by alternative id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub totals: Option<MapExpectation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ranking: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub section: String,
    pub subject: String,
    pub expected: String,
    pub actual: String,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub note: Option<String>,
}

fn numeric(section: &str, subject: String, expected: f64, actual: Option<f64>, tol: f64, note: &Option<String>) -> ReferenceCheck {
    ReferenceCheck {
        section: section.to_string(),
        subject,
        expected: format!("{expected}"),
        actual: actual.map_or_else(|| "missing".to_string(), |a| format!("{a:.4}")),
        tolerance: Some(tol),
        pass: actual.is_some_and(|a| (a - expected).abs() <= tol),
        note: note.clone(),
    }
}

/// Compares `eval` against every value in the model's reference block.
pub fn check_reference(model: &DecisionModel, eval: &Evaluation) -> Vec<ReferenceCheck> {
    let Some(reference) = &model.document.reference else {
        return Vec::new();
    };
    let mut out = Vec::new();

    for (node, exp) in &reference.local_weights {
        let children: Vec<_> = eval
            .weights
            .nodes
            .iter()
            .filter(|n| n.parent.as_deref() == Some(node.as_str()))
            .collect();
        for (i, &value) in exp.values.iter().enumerate() {
            let (subject, actual) = match children.get(i) {
                Some(c) => (format!("{node}/{}", c.id), Some(c.local_weight)),
                None => (format!("{node}/#{i}"), None),
            };
            out.push(numeric("local_weights", subject, value, actual, exp.tol, &exp.note));
        }
    }

    for (node, exp) in &reference.consistency {
        let report = eval.weights.analysis(node).map(|a| &a.report);
        let fields = [
            ("lambda_max", exp.lambda_max, report.map(|r| r.lambda_max)),
            ("ci", exp.ci, report.map(|r| r.ci)),
            ("cr", exp.cr, report.map(|r| r.cr)),
        ];
        for (name, e, actual) in fields {
            if let Some(e) = e {
                out.push(numeric("consistency", format!("{node}.{name}"), e.value, actual, e.tol, &exp.note));
            }
        }
        if let Some(expected) = exp.consistent {
            let actual = report.map(|r| r.consistent);
            out.push(ReferenceCheck {
                section: "consistency".into(),
                subject: format!("{node}.verdict"),
                expected: verdict(expected).into(),
                actual: actual.map_or("missing", verdict).into(),
                tolerance: None,
                pass: actual == Some(expected),
                note: exp.note.clone(),
            });
        }
    }

    if let Some(exp) = &reference.global_weights {
        for (leaf, &value) in &exp.values {
            out.push(numeric("global_weights", leaf.clone(), value, eval.weights.global_weight(leaf), exp.tol, &exp.note));
        }
    }

    if let Some(e) = reference.leaf_sum {
        let sum: f64 = eval.weights.leaves().map(|n| n.global_weight).sum();
        out.push(numeric("global_weights", "sum of leaves".into(), e.value, Some(sum), e.tol, &None));
    }

    if !reference.top_priorities.is_empty() {
        let k = reference.top_priorities.len();
        let actual: Vec<&str> = eval.priorities.iter().take(k).map(|p| p.id.as_str()).collect();
        out.push(ReferenceCheck {
            section: "priorities".into(),
            subject: format!("top {k} order"),
            expected: reference.top_priorities.join(" "),
            actual: actual.join(" "),
            tolerance: None,
            pass: actual == reference.top_priorities,
            note: None,
        });
    }

    if let Some(exp) = &reference.totals {
        for (alt, &value) in &exp.values {
            let actual = eval.ranking.as_ref().and_then(|r| r.total_of(alt));
            out.push(numeric("totals", alt.clone(), value, actual, exp.tol, &exp.note));
        }
    }

    if !reference.ranking.is_empty() {
        let actual: Vec<&str> = eval.ranking.as_ref().map(|r| r.order()).unwrap_or_default();
        out.push(ReferenceCheck {
            section: "ranking".into(),
            subject: "order".into(),
            expected: reference.ranking.join(" "),
            actual: actual.join(" "),
            tolerance: None,
            pass: actual == reference.ranking,
            note: None,
        });
    }
    out
}

