//! HTTP session service for the interactive judgment loop.
//!
//! | Method | Path | |
//! |---|---|---|
//! | GET | `/api/health` | name and version |
//! | POST | `/api/sessions` | `{from_template?, model?}` → 201 |
//! | GET | `/api/sessions/{id}` | session, per-node weights and consistency |
//! | PUT | `/api/sessions/{id}/hierarchy` | replace the criteria tree |
//! | PUT | `/api/sessions/{id}/judgments/{node_id}` | judgments → local weights + consistency |
//! | PUT | `/api/sessions/{id}/ratings` | replace rating sheets |
//! | GET | `/api/sessions/{id}/result` | full evaluation, 409 while incomplete |
//! | POST | `/api/sessions/{id}/whatif` | re-rank with overrides, session untouched |
//!
//! Mutations carry `expected_revision`; a stale value gets 409.

pub mod api;
pub mod error;
pub mod store;

use std::path::PathBuf;
use std::sync::Arc;

use axum::response::Html;
use axum::routing::{get, post, put};
use axum::Router;
use tower_http::services::ServeDir;

pub use api::AppState;
pub use error::ApiError;
pub use store::{Session, SessionStore, StoreError};

const PLACEHOLDER_INDEX: &str = include_str!("../assets/index.html");

#[derive(Debug, Clone)]
pub struct Config {
    pub state_dir: PathBuf,
    /// Web UI bundle served at `/`; a placeholder page when unset.
    pub assets_dir: Option<PathBuf>,
}

async fn api_not_found() -> ApiError {
    ApiError::not_found("no such endpoint")
}

pub fn router(state: AppState, assets_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/health", get(api::health))
        .route("/sessions", post(api::create_session))
        .route("/sessions/{id}", get(api::get_session))
        .route("/sessions/{id}/hierarchy", put(api::set_hierarchy))
        .route("/sessions/{id}/judgments/{node_id}", put(api::put_judgments))
        .route("/sessions/{id}/ratings", put(api::put_ratings))
        .route("/sessions/{id}/result", get(api::get_result))
        .route("/sessions/{id}/whatif", post(api::post_whatif))
        .fallback(api_not_found)
        .with_state(state);
    let app = Router::new().nest("/api", api);
    match assets_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.route("/", get(|| async { Html(PLACEHOLDER_INDEX) })),
    }
}

pub fn app(config: &Config) -> Result<Router, StoreError> {
    let store = SessionStore::open(&config.state_dir)?;
    let state = AppState { store: Arc::new(store) };
    Ok(router(state, config.assets_dir.clone()))
}

/// Serves until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
