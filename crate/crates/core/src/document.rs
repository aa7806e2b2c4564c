//! The JSON model document: criteria tree, judgments, alternatives, rating
//! sheets and optional reference values.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consistency::DEFAULT_THRESHOLD;
use crate::diagnostics::{Diagnostic, DiagnosticCode};
use crate::error::AhpError;
use crate::hierarchy::{validate_model, CriterionNode, ROOT_ID};
use crate::matrix::{ComparisonMatrix, Judgment, MAX_ORDER};
use crate::rating::{RatingSheet, MAX_RATING};
use crate::reference::Reference;
use crate::scale::{JudgmentValue, ScaleMode};

pub const SCHEMA_VERSION: &str = "1";

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub schema_version: String,
    pub goal: String,
    #[serde(default)]
    pub scale: ScaleMode,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Comparison of the top-level criteria.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal_matrix: Option<MatrixSpec>,
    #[serde(default)]
    pub criteria: Vec<NodeRecord>,
    #[serde(default)]
    pub alternatives: Vec<AlternativeRecord>,
    /// alternative id → leaf id → rating
    #[serde(default)]
    pub sheets: BTreeMap<String, BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<NodeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
}

impl NodeRecord {
    pub fn leaf(id: impl Into<String>, name: impl Into<String>) -> Self {
        NodeRecord {
            id: id.into(),
            name: name.into(),
            children: Vec::new(),
            matrix: None,
        }
    }
}

/// Either a full row-major matrix or a list of pairwise judgments; exactly one
/// must be present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<JudgmentValue>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub judgments: Option<Vec<JudgmentRecord>>,
}

impl MatrixSpec {
    pub fn from_judgments(judgments: Vec<JudgmentRecord>) -> Self {
        MatrixSpec {
            rows: None,
            judgments: Some(judgments),
        }
    }
}

/// `row` is preferred over `col` with intensity `value`; both are child ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JudgmentRecord {
    pub row: String,
    pub col: String,
    pub value: JudgmentValue,
}

impl JudgmentRecord {
    pub fn new(row: impl Into<String>, col: impl Into<String>, value: f64) -> Self {
        JudgmentRecord {
            row: row.into(),
            col: col.into(),
            value: JudgmentValue(value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlternativeRecord {
    pub id: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema_version {found:?} (expected {SCHEMA_VERSION:?})")]
    SchemaVersion { found: String },
    #[error("invalid model: {}", DiagnosticList(.0))]
    Invalid(Vec<Diagnostic>),
}

struct DiagnosticList<'a>(&'a [Diagnostic]);

impl fmt::Display for DiagnosticList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl From<serde_json::Error> for ModelError {
    fn from(e: serde_json::Error) -> Self {
        ModelError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Deserialize)]
struct VersionProbe {
    schema_version: Option<serde_json::Value>,
}

impl ModelDocument {
    /// An empty document: a goal and nothing else.
    pub fn blank(goal: impl Into<String>) -> Self {
        ModelDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            goal: goal.into(),
            scale: ScaleMode::default(),
            threshold: DEFAULT_THRESHOLD,
            goal_matrix: None,
            criteria: Vec::new(),
            alternatives: Vec::new(),
            sheets: BTreeMap::new(),
            reference: None,
        }
    }

    /// Parses and checks the schema version; no semantic validation.
    pub fn from_slice(bytes: &[u8]) -> Result<Self, ModelError> {
        let probe: VersionProbe = serde_json::from_slice(bytes)?;
        match probe.schema_version {
            Some(serde_json::Value::String(v)) if v == SCHEMA_VERSION => {}
            Some(serde_json::Value::String(v)) => return Err(ModelError::SchemaVersion { found: v }),
            Some(other) => return Err(ModelError::SchemaVersion { found: other.to_string() }),
            None => {
                return Err(ModelError::SchemaVersion {
                    found: String::new(),
                })
            }
        }
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    /// Leaf ids in declaration order.
    pub fn leaf_ids(&self) -> Vec<String> {
        fn walk(n: &NodeRecord, out: &mut Vec<String>) {
            if n.children.is_empty() {
                out.push(n.id.clone());
            }
            n.children.iter().for_each(|c| walk(c, out));
        }
        let mut out = Vec::new();
        self.criteria.iter().for_each(|c| walk(c, &mut out));
        out
    }

    /// Node record by id; `None` for the goal, which has no record.
    pub fn node(&self, id: &str) -> Option<&NodeRecord> {
        fn find<'a>(nodes: &'a [NodeRecord], id: &str) -> Option<&'a NodeRecord> {
            nodes
                .iter()
                .find_map(|n| if n.id == id { Some(n) } else { find(&n.children, id) })
        }
        find(&self.criteria, id)
    }

    fn node_mut(&mut self, id: &str) -> Option<&mut NodeRecord> {
        fn find<'a>(nodes: &'a mut [NodeRecord], id: &str) -> Option<&'a mut NodeRecord> {
            for n in nodes {
                if n.id == id {
                    return Some(n);
                }
                if let Some(found) = find(&mut n.children, id) {
                    return Some(found);
                }
            }
            None
        }
        find(&mut self.criteria, id)
    }

    /// Child ids of an internal node, or of the goal for [`ROOT_ID`].
    pub fn child_ids(&self, node_id: &str) -> Option<Vec<String>> {
        if node_id == ROOT_ID {
            return Some(self.criteria.iter().map(|c| c.id.clone()).collect());
        }
        self.node(node_id)
            .map(|n| n.children.iter().map(|c| c.id.clone()).collect())
    }

    /// Replaces the comparison of `node_id`'s children. Returns `false` when the
    /// node does not exist.
    pub fn set_matrix(&mut self, node_id: &str, spec: Option<MatrixSpec>) -> bool {
        if node_id == ROOT_ID {
            self.goal_matrix = spec;
            return true;
        }
        match self.node_mut(node_id) {
            Some(n) => {
                n.matrix = spec;
                true
            }
            None => false,
        }
    }

    /// Builds the domain tree, keeping every matrix that could be constructed.
    pub fn build_tree(&self) -> (CriterionNode, Vec<Diagnostic>) {
        let mut diags = Vec::new();
        let children = self
            .criteria
            .iter()
            .enumerate()
            .map(|(i, c)| self.convert_node(c, &format!("criteria[{i}]"), &mut diags))
            .collect();
        let mut root = CriterionNode::internal(ROOT_ID, self.goal.clone(), children, None);
        root.matrix = self.convert_matrix(
            ROOT_ID,
            &root.child_ids(),
            self.goal_matrix.as_ref(),
            "goal_matrix",
            &mut diags,
        );
        (root, diags)
    }

    fn convert_node(&self, rec: &NodeRecord, path: &str, diags: &mut Vec<Diagnostic>) -> CriterionNode {
        let children: Vec<CriterionNode> = rec
            .children
            .iter()
            .enumerate()
            .map(|(i, c)| self.convert_node(c, &format!("{path}.children[{i}]"), diags))
            .collect();
        let ids: Vec<String> = children.iter().map(|c| c.id.clone()).collect();
        let matrix = self.convert_matrix(&rec.id, &ids, rec.matrix.as_ref(), &format!("{path}.matrix"), diags);
        CriterionNode::internal(rec.id.clone(), rec.name.clone(), children, matrix)
    }

    fn convert_matrix(
        &self,
        node: &str,
        child_ids: &[String],
        spec: Option<&MatrixSpec>,
        path: &str,
        diags: &mut Vec<Diagnostic>,
    ) -> Option<ComparisonMatrix> {
        let spec = spec?;
        let diag = |code, msg: String| Diagnostic::new(code, msg).at(node).field(path);
        if child_ids.len() < 2 {
            diags.push(diag(
                DiagnosticCode::InvalidMatrix,
                format!("a comparison needs at least two children, found {}", child_ids.len()),
            ));
            return None;
        }
        if child_ids.len() > MAX_ORDER {
            // reported by validate_model
            return None;
        }
        let built = match (&spec.rows, &spec.judgments) {
            (Some(rows), None) => {
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|v| v.get()).collect())
                    .collect();
                ComparisonMatrix::from_rows(child_ids.to_vec(), rows, self.scale)
            }
            (None, Some(js)) => {
                let mut judgments = Vec::with_capacity(js.len());
                for (k, j) in js.iter().enumerate() {
                    let row = child_ids.iter().position(|c| *c == j.row);
                    let col = child_ids.iter().position(|c| *c == j.col);
                    match (row, col) {
                        (Some(r), Some(c)) => judgments.push(Judgment::new(r, c, j.value.get())),
                        _ => {
                            let missing = if row.is_none() { &j.row } else { &j.col };
                            diags.push(
                                Diagnostic::new(
                                    DiagnosticCode::InvalidJudgments,
                                    format!("{missing:?} is not a child of {node:?}"),
                                )
                                .at(node)
                                .field(format!("{path}.judgments[{k}]")),
                            );
                            return None;
                        }
                    }
                }
                ComparisonMatrix::build(child_ids.to_vec(), &judgments, self.scale)
            }
            _ => {
                diags.push(diag(
                    DiagnosticCode::InvalidMatrix,
                    "give exactly one of `rows` or `judgments`".to_string(),
                ));
                return None;
            }
        };
        match built {
            Ok(m) => Some(m),
            Err(AhpError::DuplicateLabel(_)) => None, // reported as a duplicate id
            Err(e) => {
                let code = match &e {
                    AhpError::NotReciprocal { .. } => DiagnosticCode::NotReciprocal,
                    AhpError::NonPositive { .. } => DiagnosticCode::NonPositive,
                    AhpError::OffScale { .. } => DiagnosticCode::OffScale,
                    AhpError::LabelCount { .. } | AhpError::NotSquare { .. } | AhpError::UnsupportedOrder(_) => {
                        DiagnosticCode::DimensionMismatch
                    }
                    AhpError::IncompleteJudgments { .. }
                    | AhpError::ConflictingJudgment { .. }
                    | AhpError::DiagonalJudgment(_)
                    | AhpError::IndexOutOfRange { .. } => DiagnosticCode::InvalidJudgments,
                    _ => DiagnosticCode::InvalidMatrix,
                };
                let field = match &e {
                    AhpError::NonPositive { row, col, .. }
                    | AhpError::OffScale { row, col, .. }
                    | AhpError::NotReciprocal { row, col, .. } => entry_field(spec, child_ids, path, *row, *col),
                    _ => None,
                };
                diags.push(diag(code, e.to_string()).field(field.unwrap_or_else(|| path.to_string())));
                None
            }
        }
    }

    /// Rating sheets in `alternatives` order, skipping alternatives without one.
    pub fn rating_sheets(&self) -> Vec<RatingSheet> {
        self.alternatives
            .iter()
            .filter_map(|a| {
                self.sheets.get(&a.id).map(|r| RatingSheet {
                    alternative_id: a.id.clone(),
                    ratings: r.clone(),
                })
            })
            .collect()
    }

    /// Every problem in the document, including "not finished yet" ones.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let (root, mut diags) = self.build_tree();
        let failed: HashSet<String> = diags.iter().filter_map(|d| d.target.clone()).collect();
        diags.extend(
            validate_model(&root, self.scale)
                .into_iter()
                .filter(|d| !(d.code == DiagnosticCode::MissingMatrix && d.target.as_ref().is_some_and(|t| failed.contains(t)))),
        );
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            diags.push(
                Diagnostic::new(DiagnosticCode::InvalidThreshold, format!("threshold {} must be positive", self.threshold))
                    .field("threshold"),
            );
        }
        diags.extend(self.sheet_diagnostics());
        diags
    }

    /// Diagnostics excluding the ones that only mean "incomplete".
    pub fn blocking_diagnostics(&self) -> Vec<Diagnostic> {
        self.diagnostics()
            .into_iter()
            .filter(|d| !d.code.is_incomplete())
            .collect()
    }

    fn sheet_diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let leaves = self.leaf_ids();
        let mut seen = HashSet::new();
        for (i, a) in self.alternatives.iter().enumerate() {
            if a.id.trim().is_empty() {
                out.push(Diagnostic::new(DiagnosticCode::EmptyId, "alternative with an empty id").field(format!("alternatives[{i}]")));
            } else if !seen.insert(a.id.as_str()) {
                out.push(
                    Diagnostic::new(DiagnosticCode::DuplicateAlternative, format!("duplicate alternative {:?}", a.id))
                        .at(a.id.clone())
                        .field(format!("alternatives[{i}]")),
                );
            }
        }
        for (alt, ratings) in &self.sheets {
            if !seen.contains(alt.as_str()) {
                out.push(
                    Diagnostic::new(DiagnosticCode::UnknownAlternative, format!("sheet for unknown alternative {alt:?}"))
                        .at(alt.clone())
                        .field(format!("sheets.{alt}")),
                );
                continue;
            }
            for (leaf, &r) in ratings {
                let field = format!("sheets.{alt}.{leaf}");
                if !leaves.contains(leaf) {
                    out.push(
                        Diagnostic::new(DiagnosticCode::UnknownLeaf, format!("{leaf:?} is not a leaf criterion"))
                            .at(alt.clone())
                            .field(field),
                    );
                } else if !(0..=MAX_RATING).contains(&r) {
                    out.push(
                        Diagnostic::new(DiagnosticCode::RatingOutOfRange, format!("rating {r} is outside 0..=10"))
                            .at(alt.clone())
                            .field(field),
                    );
                }
            }
            for leaf in &leaves {
                if !ratings.contains_key(leaf) {
                    out.push(
                        Diagnostic::new(DiagnosticCode::MissingRating, format!("no rating for {leaf:?}"))
                            .at(alt.clone())
                            .field(format!("sheets.{alt}.{leaf}")),
                    );
                }
            }
        }
        for a in &self.alternatives {
            if !self.sheets.contains_key(&a.id) {
                out.push(
                    Diagnostic::new(DiagnosticCode::MissingSheet, "no rating sheet")
                        .at(a.id.clone())
                        .field(format!("sheets.{}", a.id)),
                );
            }
        }
        out
    }
}

/// Field path of the judgment or cell that produced matrix entry `(row, col)`.
fn entry_field(spec: &MatrixSpec, ids: &[String], path: &str, row: usize, col: usize) -> Option<String> {
    if spec.rows.is_some() {
        return Some(format!("{path}.rows[{row}][{col}]"));
    }
    let (a, b) = (ids.get(row)?, ids.get(col)?);
    let k = spec
        .judgments
        .as_ref()?
        .iter()
        .position(|j| (&j.row == a && &j.col == b) || (&j.row == b && &j.col == a))?;
    Some(format!("{path}.judgments[{k}].value"))
}

/// A fully validated model ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionModel {
    pub document: ModelDocument,
    pub root: CriterionNode,
    pub sheets: Vec<RatingSheet>,
}

impl DecisionModel {
    pub fn from_document(document: ModelDocument) -> Result<Self, ModelError> {
        let diags = document.diagnostics();
        if !diags.is_empty() {
            return Err(ModelError::Invalid(diags));
        }
        let (root, _) = document.build_tree();
        let sheets = document.rating_sheets();
        Ok(DecisionModel { document, root, sheets })
    }

    pub fn alternative_name(&self, id: &str) -> Option<&str> {
        self.document
            .alternatives
            .iter()
            .find(|a| a.id == id)
            .map(|a| a.name.as_str())
    }
}

/// Parses and fully validates a model document.
pub fn load_model(bytes: &[u8]) -> Result<DecisionModel, ModelError> {
    DecisionModel::from_document(ModelDocument::from_slice(bytes)?)
}

pub fn save_model(doc: &ModelDocument) -> Vec<u8> {
    doc.to_json().into_bytes()
}
