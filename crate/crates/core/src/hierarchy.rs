//! Criteria trees, local and global weight propagation, and leaf prioritization.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consistency::{analyze, ConsistencyReport};
use crate::diagnostics::{Diagnostic, DiagnosticCode};
use crate::error::AhpError;
use crate::matrix::{ComparisonMatrix, MAX_ORDER};
use crate::priority::PriorityVector;
use crate::scale::ScaleMode;

/// Id of the implicit root node holding the goal.
pub const ROOT_ID: &str = "goal";

/// A node in the criteria tree. Leaves are the criteria alternatives are rated on.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionNode {
    pub id: String,
    pub name: String,
    pub children: Vec<CriterionNode>,
    /// Comparison of `children`, labelled by child id.
    pub matrix: Option<ComparisonMatrix>,
}

impl CriterionNode {
    pub fn leaf(id: impl Into<String>, name: impl Into<String>) -> Self {
        CriterionNode {
            id: id.into(),
            name: name.into(),
            children: Vec::new(),
            matrix: None,
        }
    }

    pub fn internal(
        id: impl Into<String>,
        name: impl Into<String>,
        children: Vec<CriterionNode>,
        matrix: Option<ComparisonMatrix>,
    ) -> Self {
        CriterionNode {
            id: id.into(),
            name: name.into(),
            children,
            matrix,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn child_ids(&self) -> Vec<String> {
        self.children.iter().map(|c| c.id.clone()).collect()
    }

    /// Pre-order traversal.
    pub fn walk(&self) -> Vec<&CriterionNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.children.iter().rev());
        }
        out
    }

    /// Leaves in declaration order.
    pub fn leaves(&self) -> Vec<&CriterionNode> {
        self.walk().into_iter().filter(|n| n.is_leaf()).collect()
    }

    pub fn internal_nodes(&self) -> Vec<&CriterionNode> {
        self.walk().into_iter().filter(|n| !n.is_leaf()).collect()
    }

    pub fn find(&self, id: &str) -> Option<&CriterionNode> {
        self.walk().into_iter().find(|n| n.id == id)
    }

    pub fn find_mut(&mut self, id: &str) -> Option<&mut CriterionNode> {
        if self.id == id {
            return Some(self);
        }
        self.children.iter_mut().find_map(|c| c.find_mut(id))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HierarchyError {
    #[error("node {0:?} has children but no comparison matrix")]
    MissingMatrix(String),
    #[error("node {node:?}: matrix order {order} does not match {children} children")]
    DimensionMismatch {
        node: String,
        order: usize,
        children: usize,
    },
    #[error("node {node:?}: matrix labels {found:?} do not match child ids {expected:?}")]
    LabelMismatch {
        node: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("node {node:?}: {source}")]
    Analysis {
        node: String,
        #[source]
        source: AhpError,
    },
}

/// Result of analyzing one internal node's matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeAnalysis {
    pub node_id: String,
    pub priorities: PriorityVector,
    pub report: ConsistencyReport,
}

/// Per-node weight among its siblings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalEntry {
    pub id: String,
    pub name: String,
    pub parent: Option<String>,
    pub depth: usize,
    pub is_leaf: bool,
    pub local_weight: f64,
}

/// Local weights for every node, before propagation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalWeights {
    /// Pre-order, root first.
    pub entries: Vec<LocalEntry>,
    pub analyses: Vec<NodeAnalysis>,
}

impl LocalWeights {
    /// Internal nodes whose consistency ratio failed the threshold.
    pub fn inconsistent_nodes(&self) -> Vec<&str> {
        self.analyses
            .iter()
            .filter(|a| !a.report.consistent)
            .map(|a| a.node_id.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeWeight {
    pub id: String,
    pub name: String,
    pub parent: Option<String>,
    /// Child of the root on this node's path; `None` for the root itself.
    pub top_criterion: Option<String>,
    pub depth: usize,
    pub is_leaf: bool,
    pub local_weight: f64,
    pub global_weight: f64,
}

/// Local and global weights for every node plus the per-node analyses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    /// Pre-order, root first.
    pub nodes: Vec<NodeWeight>,
    pub analyses: Vec<NodeAnalysis>,
}

impl WeightTable {
    pub fn node(&self, id: &str) -> Option<&NodeWeight> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn global_weight(&self, id: &str) -> Option<f64> {
        self.node(id).map(|n| n.global_weight)
    }

    /// Leaves in declaration order.
    pub fn leaves(&self) -> impl Iterator<Item = &NodeWeight> {
        self.nodes.iter().filter(|n| n.is_leaf)
    }

    pub fn analysis(&self, node_id: &str) -> Option<&NodeAnalysis> {
        self.analyses.iter().find(|a| a.node_id == node_id)
    }

    /// Consistency of the matrix that produced this node's local weight.
    pub fn consistency_of(&self, id: &str) -> Option<&ConsistencyReport> {
        let parent = self.node(id)?.parent.as_deref()?;
        self.analysis(parent).map(|a| &a.report)
    }

    pub fn inconsistent_nodes(&self) -> Vec<&str> {
        self.analyses
            .iter()
            .filter(|a| !a.report.consistent)
            .map(|a| a.node_id.as_str())
            .collect()
    }

    pub fn all_consistent(&self) -> bool {
        self.analyses.iter().all(|a| a.report.consistent)
    }
}

/// Analyzes every internal node's matrix and assigns local weights to its
/// children. Inconsistent matrices are recorded in the analyses, not rejected.
///
/// A node with a single child needs no matrix; the child gets weight 1.
pub fn compute_local_weights(
    root: &CriterionNode,
    threshold: f64,
) -> Result<LocalWeights, HierarchyError> {
    let mut entries = vec![LocalEntry {
        id: root.id.clone(),
        name: root.name.clone(),
        parent: None,
        depth: 0,
        is_leaf: root.is_leaf(),
        local_weight: 1.0,
    }];
    let mut analyses = Vec::new();
    visit_local(root, 0, threshold, &mut entries, &mut analyses)?;
    Ok(LocalWeights { entries, analyses })
}

fn visit_local(
    node: &CriterionNode,
    depth: usize,
    threshold: f64,
    entries: &mut Vec<LocalEntry>,
    analyses: &mut Vec<NodeAnalysis>,
) -> Result<(), HierarchyError> {
    if node.is_leaf() {
        return Ok(());
    }
    let weights = if node.children.len() == 1 {
        vec![1.0]
    } else {
        let m = node
            .matrix
            .as_ref()
            .ok_or_else(|| HierarchyError::MissingMatrix(node.id.clone()))?;
        check_matrix_shape(node, m)?;
        let (priorities, report) = analyze(m, threshold).map_err(|source| HierarchyError::Analysis {
            node: node.id.clone(),
            source,
        })?;
        let w = priorities.weights.clone();
        analyses.push(NodeAnalysis {
            node_id: node.id.clone(),
            priorities,
            report,
        });
        w
    };
    for (child, w) in node.children.iter().zip(weights) {
        entries.push(LocalEntry {
            id: child.id.clone(),
            name: child.name.clone(),
            parent: Some(node.id.clone()),
            depth: depth + 1,
            is_leaf: child.is_leaf(),
            local_weight: w,
        });
        visit_local(child, depth + 1, threshold, entries, analyses)?;
    }
    Ok(())
}

fn check_matrix_shape(node: &CriterionNode, m: &ComparisonMatrix) -> Result<(), HierarchyError> {
    if m.order() != node.children.len() {
        return Err(HierarchyError::DimensionMismatch {
            node: node.id.clone(),
            order: m.order(),
            children: node.children.len(),
        });
    }
    let expected = node.child_ids();
    if m.labels() != expected.as_slice() {
        return Err(HierarchyError::LabelMismatch {
            node: node.id.clone(),
            expected,
            found: m.labels().to_vec(),
        });
    }
    Ok(())
}

/// Multiplies local weights down each root path.
pub fn compute_global_weights(local: &LocalWeights, root: &CriterionNode) -> WeightTable {
    let mut nodes: Vec<NodeWeight> = Vec::with_capacity(local.entries.len());
    for e in &local.entries {
        let (global, top) = match &e.parent {
            None => (1.0, None),
            Some(p) => {
                let parent = nodes
                    .iter()
                    .find(|n| &n.id == p)
                    .expect("pre-order places parents before children");
                let top = if parent.parent.is_none() {
                    Some(e.id.clone())
                } else {
                    parent.top_criterion.clone()
                };
                (parent.global_weight * e.local_weight, top)
            }
        };
        nodes.push(NodeWeight {
            id: e.id.clone(),
            name: e.name.clone(),
            parent: e.parent.clone(),
            top_criterion: top,
            depth: e.depth,
            is_leaf: e.is_leaf,
            local_weight: e.local_weight,
            global_weight: global,
        });
    }
    debug_assert_eq!(nodes.first().map(|n| n.id.as_str()), Some(root.id.as_str()));
    WeightTable {
        nodes,
        analyses: local.analyses.clone(),
    }
}

/// Local then global weights in one call.
pub fn compute_weights(root: &CriterionNode, threshold: f64) -> Result<WeightTable, HierarchyError> {
    let local = compute_local_weights(root, threshold)?;
    Ok(compute_global_weights(&local, root))
}

/// Leaves by descending global weight. Ties keep declaration order.
pub fn prioritize_leaves(table: &WeightTable) -> Vec<(String, f64)> {
    let mut leaves: Vec<(String, f64)> = table
        .leaves()
        .map(|n| (n.id.clone(), n.global_weight))
        .collect();
    // stable: equal weights stay in declaration order
    leaves.sort_by(|a, b| b.1.total_cmp(&a.1));
    leaves
}

/// Structural problems that keep the tree from being evaluated.
///
/// An empty result means `compute_weights` will succeed. Off-scale entries are
/// reported only under [`ScaleMode::Strict`].
pub fn validate_model(root: &CriterionNode, scale: ScaleMode) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if root.children.is_empty() {
        out.push(Diagnostic::new(DiagnosticCode::NoCriteria, "no criteria").at(root.id.clone()));
    }
    let mut seen = HashSet::new();
    for node in root.walk() {
        if node.id.trim().is_empty() {
            out.push(Diagnostic::new(DiagnosticCode::EmptyId, format!("node {:?} has an empty id", node.name)));
        } else if !seen.insert(node.id.as_str()) {
            out.push(
                Diagnostic::new(DiagnosticCode::DuplicateId, format!("duplicate id {:?}", node.id))
                    .at(node.id.clone()),
            );
        }
        if node.is_leaf() {
            continue;
        }
        let k = node.children.len();
        if k > MAX_ORDER {
            out.push(
                Diagnostic::new(
                    DiagnosticCode::UnsupportedOrder,
                    format!("{k} children; at most {MAX_ORDER} can be compared"),
                )
                .at(node.id.clone()),
            );
            continue;
        }
        match &node.matrix {
            None if k >= 2 => out.push(
                Diagnostic::new(DiagnosticCode::MissingMatrix, "no comparison matrix").at(node.id.clone()),
            ),
            None => {}
            Some(m) if m.order() != k => out.push(
                Diagnostic::new(
                    DiagnosticCode::DimensionMismatch,
                    format!("{k} children but a {o}x{o} matrix", o = m.order()),
                )
                .at(node.id.clone()),
            ),
            Some(m) => {
                if m.labels() != node.child_ids().as_slice() {
                    out.push(
                        Diagnostic::new(
                            DiagnosticCode::LabelMismatch,
                            format!("matrix labels {:?} do not match child ids {:?}", m.labels(), node.child_ids()),
                        )
                        .at(node.id.clone()),
                    );
                }
                if scale == ScaleMode::Strict {
                    for j in m.off_scale_entries() {
                        out.push(
                            Diagnostic::new(
                                DiagnosticCode::OffScale,
                                format!(
                                    "{} over {} = {} is not on the 1..9 scale",
                                    m.labels()[j.row],
                                    m.labels()[j.col],
                                    j.value
                                ),
                            )
                            .at(node.id.clone()),
                        );
                    }
                }
            }
        }
    }
    out
}
