#![no_main]

use std::sync::{Arc, OnceLock};

use ahp_service::{router, AppState, SessionStore};
use axum::body::Body;
use axum::http::{Method, Request};
use libfuzzer_sys::fuzz_target;
use tower::ServiceExt;

struct Harness {
    rt: tokio::runtime::Runtime,
    app: axum::Router,
    session: String,
    _dir: tempfile::TempDir,
}

fn harness() -> &'static Harness {
    static H: OnceLock<Harness> = OnceLock::new();
    H.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::open(dir.path()).unwrap();
        let app = router(AppState { store: Arc::new(store) }, None);
        let rt = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
        let session = rt
            .block_on(async {
                let req = Request::post("/api/sessions")
                    .header("content-type", "application/json")
                    .body(Body::from(r#"{"from_template": "steel-pipe-api"}"#))
                    .unwrap();
                app.clone().oneshot(req).await.unwrap().into_body()
            });
        let bytes = rt.block_on(axum::body::to_bytes(session, usize::MAX)).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let session = v["id"].as_str().unwrap().to_string();
        Harness { rt, app, session, _dir: dir }
    })
}

// first byte picks the endpoint, the rest is the request body
fuzz_target!(|data: &[u8]| {
    let Some((&pick, body)) = data.split_first() else {
        return;
    };
    let h = harness();
    let id = &h.session;
    let (method, uri) = match pick % 6 {
        0 => (Method::POST, "/api/sessions".to_string()),
        1 => (Method::PUT, format!("/api/sessions/{id}/hierarchy")),
        2 => (Method::PUT, format!("/api/sessions/{id}/judgments/goal")),
        3 => (Method::PUT, format!("/api/sessions/{id}/judgments/quality")),
        4 => (Method::PUT, format!("/api/sessions/{id}/ratings")),
        _ => (Method::POST, format!("/api/sessions/{id}/whatif")),
    };
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_vec()))
        .unwrap();
    let resp = h.rt.block_on(h.app.clone().oneshot(req)).unwrap();
    assert!(!resp.status().is_server_error(), "status {}", resp.status());
    if pick % 6 != 5 {
        // keep later inputs exercising the result path as well
        let req = Request::get(format!("/api/sessions/{id}/result")).body(Body::empty()).unwrap();
        let resp = h.rt.block_on(h.app.clone().oneshot(req)).unwrap();
        assert!(!resp.status().is_server_error(), "result status {}", resp.status());
    }
});
