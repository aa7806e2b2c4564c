//! Request handlers. All arithmetic is delegated to `ahp_core`.

use std::collections::BTreeMap;
use std::sync::Arc;

use ahp_core::document::{AlternativeRecord, JudgmentRecord, NodeRecord, SCHEMA_VERSION};
use ahp_core::fixtures::template;
use ahp_core::{
    analyze, evaluate, evaluate_with, ConsistencyReport, CriterionNode, DecisionModel, Diagnostic, DiagnosticCode,
    Evaluation, MatrixSpec, ModelDocument, Override, ROOT_ID,
};
use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::Json;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{ApiError, MissingRating};
use crate::store::{Session, SessionStore};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<SessionStore>,
}

/// Runs blocking store work off the async executor.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(format!("store task failed: {e}")))?
}

/// Malformed JSON is a 400; well-formed JSON of the wrong shape is a 422.
fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| {
        if e.is_data() {
            ApiError::unprocessable(e.to_string())
        } else {
            ApiError::bad_request(e.to_string())
        }
    })
}

#[derive(Debug, Serialize)]
pub struct Health {
    pub status: &'static str,
    pub name: &'static str,
    pub version: &'static str,
    pub schema_version: &'static str,
}

pub async fn health() -> Json<Health> {
    Json(Health {
        status: "ok",
        name: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        schema_version: SCHEMA_VERSION,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalWeight {
    pub id: String,
    pub weight: f64,
}

/// Judgment state of one internal node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeStatus {
    pub id: String,
    pub name: String,
    pub children: Vec<String>,
    /// Single-child nodes count as judged.
    pub judged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_weights: Option<Vec<LocalWeight>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency: Option<ConsistencyReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub revision: u64,
    pub created_at: u64,
    pub modified_at: u64,
    pub model: ModelDocument,
    pub nodes: Vec<NodeStatus>,
    /// True when a result can be computed.
    pub complete: bool,
    pub diagnostics: Vec<Diagnostic>,
}

fn local_weights(node: &CriterionNode, threshold: f64) -> Option<(Vec<LocalWeight>, Option<ConsistencyReport>)> {
    match &node.matrix {
        Some(m) => {
            let (p, report) = analyze(m, threshold).ok()?;
            let weights = p
                .labels
                .into_iter()
                .zip(p.weights)
                .map(|(id, weight)| LocalWeight { id, weight })
                .collect();
            Some((weights, Some(report)))
        }
        None if node.children.len() == 1 => Some((
            vec![LocalWeight {
                id: node.children[0].id.clone(),
                weight: 1.0,
            }],
            None,
        )),
        None => None,
    }
}

fn view(session: Session) -> SessionView {
    let (root, _) = session.model.build_tree();
    let threshold = session.model.threshold;
    let nodes = root
        .internal_nodes()
        .into_iter()
        .map(|n| {
            let lw = local_weights(n, threshold);
            NodeStatus {
                id: n.id.clone(),
                name: n.name.clone(),
                children: n.child_ids(),
                judged: lw.is_some(),
                consistency: lw.as_ref().and_then(|(_, r)| r.clone()),
                local_weights: lw.map(|(w, _)| w),
            }
        })
        .collect();
    let diagnostics = session.model.diagnostics();
    SessionView {
        complete: diagnostics.is_empty(),
        id: session.id,
        revision: session.revision,
        created_at: session.created_at,
        modified_at: session.modified_at,
        model: session.model,
        nodes,
        diagnostics,
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    #[serde(default)]
    pub from_template: Option<String>,
    #[serde(default)]
    pub model: Option<ModelDocument>,
}

fn check_blocking(doc: &ModelDocument) -> Result<(), ApiError> {
    let blocking = doc.blocking_diagnostics();
    if blocking.is_empty() {
        Ok(())
    } else {
        Err(ApiError::invalid_model(blocking))
    }
}

pub async fn create_session(
    State(state): State<AppState>,
    body: Bytes,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let req: CreateSession = if body.iter().all(u8::is_ascii_whitespace) {
        CreateSession::default()
    } else {
        parse(&body)?
    };
    let doc = match (req.from_template, req.model) {
        (Some(_), Some(_)) => return Err(ApiError::unprocessable("give either from_template or model, not both")),
        (Some(name), None) => match template(&name) {
            Some(t) => t.map_err(|e| ApiError::internal(e.to_string()))?,
            None => {
                return Err(ApiError::invalid_model(vec![Diagnostic::new(
                    DiagnosticCode::UnknownTemplate,
                    format!("unknown template {name:?}"),
                )
                .field("from_template")]))
            }
        },
        (None, Some(model)) => {
            if model.schema_version != SCHEMA_VERSION {
                return Err(ApiError::unprocessable(format!(
                    "unsupported schema_version {:?} (expected {SCHEMA_VERSION:?})",
                    model.schema_version
                )));
            }
            model
        }
        (None, None) => ModelDocument::blank("Untitled decision"),
    };
    check_blocking(&doc)?;
    let store = state.store.clone();
    let session = blocking(move || Ok(store.create(doc)?)).await?;
    Ok((StatusCode::CREATED, Json(view(session))))
}

pub async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let store = state.store.clone();
    let session = blocking(move || Ok(store.get(&id)?)).await?;
    Ok(Json(view(session)))
}

/// Runs a mutation under the session lock; `f` sees the model and either
/// edits it or rejects the request.
async fn mutate<T: Send + 'static>(
    state: &AppState,
    id: String,
    expected_revision: u64,
    f: impl FnOnce(&mut ModelDocument) -> Result<T, ApiError> + Send + 'static,
) -> Result<(Session, T), ApiError> {
    let store = state.store.clone();
    blocking(move || store.update(&id, expected_revision, f)?).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetHierarchy {
    pub expected_revision: u64,
    #[serde(default)]
    pub goal: Option<String>,
    #[serde(default)]
    pub goal_matrix: Option<MatrixSpec>,
    pub criteria: Vec<NodeRecord>,
    #[serde(default)]
    pub alternatives: Option<Vec<AlternativeRecord>>,
}

/// Replaces the criteria tree (and optionally the goal and alternatives).
/// Ratings for leaves or alternatives that no longer exist are dropped.
pub async fn set_hierarchy(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<SessionView>, ApiError> {
    let req: SetHierarchy = parse(&body)?;
    let (session, ()) = mutate(&state, id, req.expected_revision, move |doc| {
        if let Some(goal) = req.goal {
            doc.goal = goal;
        }
        doc.goal_matrix = req.goal_matrix;
        doc.criteria = req.criteria;
        if let Some(alts) = req.alternatives {
            doc.alternatives = alts;
        }
        let leaves = doc.leaf_ids();
        let alts: Vec<String> = doc.alternatives.iter().map(|a| a.id.clone()).collect();
        doc.sheets.retain(|alt, _| alts.contains(alt));
        for ratings in doc.sheets.values_mut() {
            ratings.retain(|leaf, _| leaves.contains(leaf));
        }
        check_blocking(doc)
    })
    .await?;
    Ok(Json(view(session)))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PutJudgments {
    pub expected_revision: u64,
    /// Each unordered pair of children exactly once.
    pub judgments: Vec<JudgmentRecord>,
}

/// Live feedback for one node after its judgments change.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JudgmentFeedback {
    pub revision: u64,
    pub node_id: String,
    pub local_weights: Vec<LocalWeight>,
    pub consistency: ConsistencyReport,
    /// The judgments should be revisited before relying on the result.
    pub needs_rejudgment: bool,
}

pub async fn put_judgments(
    State(state): State<AppState>,
    Path((id, node_id)): Path<(String, String)>,
    body: Bytes,
) -> Result<Json<JudgmentFeedback>, ApiError> {
    let req: PutJudgments = parse(&body)?;
    let node = node_id.clone();
    let (session, (local_weights, consistency)) = mutate(&state, id, req.expected_revision, move |doc| {
        match doc.child_ids(&node) {
            Some(ids) if !ids.is_empty() => {}
            _ => return Err(ApiError::not_found(format!("no criterion with children has id {node:?}"))),
        }
        doc.set_matrix(&node, Some(MatrixSpec::from_judgments(req.judgments)));
        check_blocking(doc)?;
        let (root, _) = doc.build_tree();
        let target = root
            .find(&node)
            .ok_or_else(|| ApiError::not_found(format!("criterion {node:?} not found")))?;
        match target.matrix.as_ref().map(|m| analyze(m, doc.threshold)) {
            Some(Ok((p, report))) => {
                let w = p.labels.into_iter().zip(p.weights).map(|(id, weight)| LocalWeight { id, weight });
                Ok((w.collect::<Vec<_>>(), report))
            }
            Some(Err(e)) => Err(ApiError::unprocessable(e.to_string())),
            None => Err(ApiError::unprocessable(format!("{node:?} has a single child and takes no judgments"))),
        }
    })
    .await?;
    Ok(Json(JudgmentFeedback {
        revision: session.revision,
        node_id,
        local_weights,
        needs_rejudgment: !consistency.consistent,
        consistency,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PutRatings {
    pub expected_revision: u64,
    /// alternative id → leaf id → rating; replaces all sheets.
    pub sheets: BTreeMap<String, BTreeMap<String, i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatingsSummary {
    pub revision: u64,
    pub complete: bool,
    pub rated_cells: usize,
    pub expected_cells: usize,
    pub missing: Vec<MissingRating>,
}

fn missing_ratings(diags: &[Diagnostic]) -> Vec<MissingRating> {
    diags
        .iter()
        .filter_map(|d| match d.code {
            DiagnosticCode::MissingSheet => Some(MissingRating {
                alternative: d.target.clone().unwrap_or_default(),
                leaf: None,
            }),
            DiagnosticCode::MissingRating => {
                let alt = d.target.clone().unwrap_or_default();
                let prefix = format!("sheets.{alt}.");
                let leaf = d.field.as_deref().and_then(|f| f.strip_prefix(&prefix)).map(str::to_string);
                Some(MissingRating { alternative: alt, leaf })
            }
            _ => None,
        })
        .collect()
}

pub async fn put_ratings(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<RatingsSummary>, ApiError> {
    let req: PutRatings = parse(&body)?;
    let (session, ()) = mutate(&state, id, req.expected_revision, move |doc| {
        doc.sheets = req.sheets;
        check_blocking(doc)
    })
    .await?;
    let doc = &session.model;
    let missing = missing_ratings(&doc.diagnostics());
    Ok(Json(RatingsSummary {
        revision: session.revision,
        complete: missing.is_empty(),
        rated_cells: doc.sheets.values().map(|s| s.len()).sum(),
        expected_cells: doc.alternatives.len() * doc.leaf_ids().len(),
        missing,
    }))
}

/// Builds the evaluable model, or explains what is still missing.
fn complete_model(doc: ModelDocument) -> Result<DecisionModel, ApiError> {
    check_blocking(&doc)?;
    let diags = doc.diagnostics();
    if !diags.is_empty() {
        let unjudged: Vec<String> = diags
            .iter()
            .filter(|d| d.code == DiagnosticCode::MissingMatrix || d.code == DiagnosticCode::NoCriteria)
            .map(|d| d.target.clone().unwrap_or_else(|| ROOT_ID.to_string()))
            .collect();
        let mut e = ApiError::new(
            StatusCode::CONFLICT,
            "incomplete_model",
            format!("model is incomplete: {}", diags[0]),
        );
        e.body.unjudged_nodes = unjudged;
        e.body.missing_ratings = missing_ratings(&diags);
        e.body.details = diags;
        return Err(e);
    }
    DecisionModel::from_document(doc).map_err(|e| ApiError::unprocessable(e.to_string()))
}

pub async fn get_result(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Evaluation>, ApiError> {
    let store = state.store.clone();
    let session = blocking(move || Ok(store.get(&id)?)).await?;
    let model = complete_model(session.model)?;
    Ok(Json(evaluate(&model, None)?))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIf {
    #[serde(default)]
    pub overrides: Vec<Override>,
}

/// Re-ranks with hypothetical ratings; the session is not modified.
pub async fn post_whatif(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<Evaluation>, ApiError> {
    let req: WhatIf = parse(&body)?;
    if let Some((i, o)) = req.overrides.iter().enumerate().find(|(_, o)| !(0..=ahp_core::rating::MAX_RATING).contains(&o.rating)) {
        return Err(ApiError::invalid_model(vec![Diagnostic::new(
            DiagnosticCode::RatingOutOfRange,
            format!("rating {} is outside 0..=10", o.rating),
        )
        .at(o.alternative.clone())
        .field(format!("overrides[{i}].rating"))]));
    }
    let store = state.store.clone();
    let session = blocking(move || Ok(store.get(&id)?)).await?;
    let model = complete_model(session.model)?;
    Ok(Json(evaluate_with(&model, None, &req.overrides)?))
}
