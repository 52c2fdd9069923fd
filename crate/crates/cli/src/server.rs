//! HTTP front end for the question-answering engine.
//!
//! | route            | response                                   |
//! |------------------|--------------------------------------------|
//! | `POST /ask`      | answer to `{"question": "..."}`            |
//! | `GET /hierarchy` | nested concept tree                        |
//! | `GET /concepts`  | lexicon entries                            |
//! | `GET /health`    | `{"status": "ok"}`                         |
//!
//! Any other path is served from the optional UI directory.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ontoforge_core::extract::Concept;
use ontoforge_core::pipeline::Artifacts;
use ontoforge_core::qa::{Answer, QaEngine, NO_ANSWER_MESSAGE};
use ontoforge_core::taxonomy::TreeNode;
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

/// Read-only state shared by all request handlers.
pub struct AppState {
    engine: QaEngine,
    hierarchy: TreeNode,
}

impl AppState {
    pub fn new(artifacts: &Artifacts) -> AppState {
        AppState {
            engine: artifacts.engine(),
            hierarchy: artifacts.hierarchy.to_tree(&artifacts.lexicon),
        }
    }
}

#[derive(Debug, Deserialize)]
struct AskRequest {
    question: String,
}

#[derive(Debug, Serialize)]
struct AskResponse {
    #[serde(flatten)]
    answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<&'static str>,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
}

fn bad_request(message: String) -> Response {
    (StatusCode::BAD_REQUEST, Json(ErrorBody { error: message })).into_response()
}

async fn ask(
    State(state): State<Arc<AppState>>,
    body: Result<Json<AskRequest>, JsonRejection>,
) -> Response {
    let Json(req) = match body {
        Ok(b) => b,
        Err(e) => return bad_request(e.body_text()),
    };
    let answer = state.engine.answer(&req.question);
    let message = (!answer.is_answered()).then_some(NO_ANSWER_MESSAGE);
    Json(AskResponse { answer, message }).into_response()
}

async fn hierarchy(State(state): State<Arc<AppState>>) -> Json<TreeNode> {
    Json(state.hierarchy.clone())
}

async fn concepts(State(state): State<Arc<AppState>>) -> Json<Vec<Concept>> {
    Json(state.engine.lexicon().concepts.clone())
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/ask", post(ask))
        .route("/hierarchy", get(hierarchy))
        .route("/concepts", get(concepts))
        .route("/health", get(health))
        .with_state(state);
    match ui_dir {
        Some(dir) => {
            api.fallback_service(ServeDir::new(dir).append_index_html_on_directories(true))
        }
        None => api,
    }
}

/// Serves until interrupted.
pub async fn serve(
    state: Arc<AppState>,
    addr: SocketAddr,
    ui_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state, ui_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
