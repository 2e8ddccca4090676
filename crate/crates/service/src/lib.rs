//! HTTP backend for annotation sessions.
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/api/sessions` | upload sentences (text or JSON) or a saved state |
//! | GET | `/api/sessions/{id}` | session summary |
//! | GET | `/api/sessions/{id}/sentences/{sid}` | tagged sentence |
//! | GET, PUT | `/api/sessions/{id}/state` | annotation state |
//! | GET | `/api/sessions/{id}/export?format=tsv\|json` | download |
//! | GET | `/api/sessions/{id}/lint` | diagnostics |
//!
//! Every acknowledged PUT is on disk before the response is sent, so a killed
//! service restarts with exactly the last acknowledged state.

use std::collections::HashSet;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use factbench::io::{export_tsv, load_sentences, parse_state, save_state, AnnotationState, FormatError};
use factbench::normalize::NormalizationConfig;
use factbench::scoring::lint_gold;
use factbench::tagger::{tag, TagError, TaggerConfig};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod config;
pub mod store;

pub use config::{load_tagger_config, ServiceConfig};
pub use store::{SessionRecord, SessionStore};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("cannot bind {0}: {1}")]
    Bind(SocketAddr, std::io::Error),
}

pub struct AppState {
    pub store: SessionStore,
    pub tagger: TaggerConfig,
}

/// Error body: `{"error": CODE, "message": text}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ApiError {
    pub error: String,
    pub message: String,
    #[serde(skip)]
    status: StatusCode,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            error: code.to_owned(),
            message: message.into(),
            status,
        }
    }

    fn not_found(what: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "NOT_FOUND", format!("unknown {what}"))
    }

    fn internal(e: ServiceError) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "STORAGE", e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl From<FormatError> for ApiError {
    fn from(e: FormatError) -> Self {
        let code = match e {
            FormatError::Empty => "EMPTY",
            FormatError::MalformedInput { .. } => "MALFORMED_INPUT",
            FormatError::DuplicateId { .. } => "DUPLICATE_ID",
            FormatError::SchemaViolation { .. } => "SCHEMA_VIOLATION",
            FormatError::VersionUnsupported { .. } => "VERSION_UNSUPPORTED",
            FormatError::ConfidenceOutOfRange { .. } => "CONFIDENCE_OUT_OF_RANGE",
            FormatError::UnknownSentence { .. } => "UNKNOWN_SENTENCE",
            FormatError::Shorthand { .. } => "MALFORMED_SHORTHAND",
        };
        ApiError::new(StatusCode::BAD_REQUEST, code, e.to_string())
    }
}

impl From<TagError> for ApiError {
    fn from(e: TagError) -> Self {
        let code = match e {
            TagError::EmptyText => "EMPTY_TEXT",
            TagError::SchemaViolation { .. } => "SCHEMA_VIOLATION",
            TagError::TokenizationMismatch(_) => "TOKENIZATION_MISMATCH",
            TagError::Model(_) => "INVALID_SENTENCE",
        };
        ApiError::new(StatusCode::BAD_REQUEST, code, e.to_string())
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Created {
    pub session_id: String,
    pub sentence_count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Summary {
    pub session_id: String,
    pub sentence_count: usize,
    pub sentence_ids: Vec<String>,
    pub synset_count: usize,
    pub cursor: Option<String>,
    pub created: String,
    pub updated: String,
}

fn looks_like_state(body: &[u8]) -> bool {
    let start = body.iter().position(|b| !b.is_ascii_whitespace());
    start.is_some_and(|i| body[i] == b'{')
}

async fn create_session(State(app): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    // a saved state reopens as a new session; anything else is a sentence file
    let state = if looks_like_state(&body) {
        factbench::io::load_state(&body)?
    } else {
        let sentences = load_sentences(&body)?
            .into_iter()
            .map(|s| tag(&s.text, &s.id, &app.tagger))
            .collect::<Result<Vec<_>, _>>()?;
        AnnotationState::new(sentences)
    };
    let rec = app.store.create(state).await.map_err(ApiError::internal)?;
    let body = Created {
        session_id: rec.id.clone(),
        sentence_count: rec.state.sentences.len(),
    };
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

fn session(app: &AppState, id: &str) -> Result<Arc<SessionRecord>, ApiError> {
    app.store.get(id).ok_or_else(|| ApiError::not_found("session"))
}

async fn get_session(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Summary>, ApiError> {
    let rec = session(&app, &id)?;
    Ok(Json(Summary {
        session_id: rec.id.clone(),
        sentence_count: rec.state.sentences.len(),
        sentence_ids: rec.state.sentences.iter().map(|s| s.id.clone()).collect(),
        synset_count: rec.state.synsets.values().map(Vec::len).sum(),
        cursor: rec.state.cursor.clone(),
        created: rec.created.clone(),
        updated: rec.updated.clone(),
    }))
}

async fn get_sentence(
    State(app): State<Arc<AppState>>,
    Path((id, sid)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let rec = session(&app, &id)?;
    let s = rec.state.sentence(&sid).ok_or_else(|| ApiError::not_found("sentence"))?;
    Ok(Json(s).into_response())
}

fn json_bytes(bytes: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], bytes).into_response()
}

async fn get_state(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let rec = session(&app, &id)?;
    Ok(json_bytes(save_state(&rec.state)))
}

async fn put_state(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<StatusCode, ApiError> {
    let known: HashSet<String> = session(&app, &id)?.sentence_ids.iter().cloned().collect();
    let state = parse_state(&body)?;
    let foreign = state
        .sentences
        .iter()
        .map(|s| &s.id)
        .chain(state.synsets.keys())
        .chain(&state.cursor)
        .find(|sid| !known.contains(*sid));
    if let Some(sid) = foreign {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "UNKNOWN_SENTENCE",
            format!("sentence {sid:?} is not part of this session"),
        ));
    }
    state.validate()?;
    match app.store.replace_state(&id, state).await {
        Ok(Some(_)) => Ok(StatusCode::NO_CONTENT),
        Ok(None) => Err(ApiError::not_found("session")),
        Err(e) => Err(ApiError::internal(e)),
    }
}

#[derive(Deserialize)]
struct ExportQuery {
    format: Option<String>,
}

async fn export(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<ExportQuery>,
) -> Result<Response, ApiError> {
    let rec = session(&app, &id)?;
    let (bytes, content_type, ext) = match q.format.as_deref() {
        Some("tsv") => (export_tsv(&rec.state), "text/tab-separated-values; charset=utf-8", "tsv"),
        Some("json") => (save_state(&rec.state), "application/json", "json"),
        other => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "UNKNOWN_FORMAT",
                format!("format must be tsv or json, got {other:?}"),
            ))
        }
    };
    let disposition = format!("attachment; filename=\"{id}.{ext}\"");
    Ok((
        [(header::CONTENT_TYPE, content_type.to_owned()), (header::CONTENT_DISPOSITION, disposition)],
        bytes,
    )
        .into_response())
}

async fn lint(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let rec = session(&app, &id)?;
    Ok(Json(lint_gold(&rec.state.gold(), &NormalizationConfig::default())).into_response())
}

const PLACEHOLDER: &str = "<!doctype html><title>factbench</title>\
<p>The annotation UI is not built. Set STATIC_DIR to its build output, or use the API under /api.</p>";

pub fn router(app: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/sessions", axum::routing::post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/sentences/{sid}", get(get_sentence))
        .route("/api/sessions/{id}/state", get(get_state).put(put_state))
        .route("/api/sessions/{id}/export", get(export))
        .route("/api/sessions/{id}/lint", get(lint))
        .with_state(app);
    match static_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(PLACEHOLDER) })),
    }
}

/// Opens the store and builds the application.
pub fn build(cfg: &ServiceConfig) -> Result<Router, ServiceError> {
    let app = Arc::new(AppState {
        store: SessionStore::open(&cfg.data_dir)?,
        tagger: cfg.tagger.clone(),
    });
    Ok(router(app, cfg.static_dir.clone()))
}

/// Serves until `shutdown` resolves.
pub async fn serve_with_shutdown(
    cfg: ServiceConfig,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
    on_bound: impl FnOnce(SocketAddr),
) -> Result<(), ServiceError> {
    let app = build(&cfg)?;
    let listener = tokio::net::TcpListener::bind(cfg.bind_addr)
        .await
        .map_err(|e| ServiceError::Bind(cfg.bind_addr, e))?;
    let addr = listener.local_addr().map_err(|e| ServiceError::Bind(cfg.bind_addr, e))?;
    on_bound(addr);
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown)
        .await
        .map_err(|e| ServiceError::Io(cfg.data_dir.clone(), e))
}

/// Serves until SIGINT or SIGTERM. Sessions need no flushing on the way out:
/// nothing is acknowledged before it is on disk.
pub async fn serve(cfg: ServiceConfig, on_bound: impl FnOnce(SocketAddr)) -> Result<(), ServiceError> {
    serve_with_shutdown(cfg, shutdown_signal(), on_bound).await
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}
