//! Local HTTP/JSON service backing the browser UI.
//!
//! Contexts, layout pins and exploration logs live in a [`Workspace`]
//! directory. Mutations of one context or one exploration session are
//! serialized; reads run concurrently. Lattice and implication computations
//! run on blocking workers and are abandoned when the context they were
//! started for changes.

mod api;
pub mod workspace;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Component, Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::http::{header, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;

use crate::exploration::ExplorationSession;
pub use workspace::{Workspace, WorkspaceError};

/// Lattices with more concepts than this are refused with 503.
pub const DEFAULT_MAX_CONCEPTS: usize = 50_000;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub workspace: PathBuf,
    /// Directory with the built web UI, served at `/`.
    pub ui_dir: Option<PathBuf>,
    pub max_concepts: usize,
}

impl ServiceConfig {
    pub fn new(workspace: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            workspace: workspace.into(),
            ui_dir: None,
            max_concepts: DEFAULT_MAX_CONCEPTS,
        }
    }
}

type SessionHandle = Arc<tokio::sync::Mutex<ExplorationSession>>;

struct Shared {
    workspace: Workspace,
    ui_dir: Option<PathBuf>,
    max_concepts: usize,
    context_locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
    generations: Mutex<HashMap<String, Arc<AtomicU64>>>,
    sessions: Mutex<HashMap<String, SessionHandle>>,
    session_ids: tokio::sync::Mutex<()>,
}

#[derive(Clone)]
pub struct AppState(Arc<Shared>);

impl AppState {
    pub fn new(config: &ServiceConfig) -> std::io::Result<Self> {
        Ok(AppState(Arc::new(Shared {
            workspace: Workspace::open(&config.workspace)?,
            ui_dir: config.ui_dir.clone(),
            max_concepts: config.max_concepts,
            context_locks: Mutex::default(),
            generations: Mutex::default(),
            sessions: Mutex::default(),
            session_ids: tokio::sync::Mutex::new(()),
        })))
    }

    pub fn workspace(&self) -> &Workspace {
        &self.0.workspace
    }

    fn context_lock(&self, name: &str) -> Arc<tokio::sync::Mutex<()>> {
        let mut locks = self.0.context_locks.lock().expect("lock poisoned");
        locks.entry(name.to_owned()).or_default().clone()
    }

    fn generation(&self, name: &str) -> Arc<AtomicU64> {
        let mut gens = self.0.generations.lock().expect("lock poisoned");
        gens.entry(name.to_owned()).or_default().clone()
    }

    /// Marks the context as changed, cancelling computations started
    /// against the previous version.
    fn bump(&self, name: &str) {
        self.generation(name).fetch_add(1, Ordering::SeqCst);
    }

    fn cached_session(&self, id: &str) -> Option<SessionHandle> {
        self.0.sessions.lock().expect("lock poisoned").get(id).cloned()
    }

    fn cache_session(&self, id: &str, session: ExplorationSession) -> SessionHandle {
        let mut sessions = self.0.sessions.lock().expect("lock poisoned");
        sessions
            .entry(id.to_owned())
            .or_insert_with(|| Arc::new(tokio::sync::Mutex::new(session)))
            .clone()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/health", get(api::health))
        .route("/api/contexts", get(api::list_contexts))
        .route(
            "/api/contexts/{name}",
            get(api::get_context)
                .put(api::put_context)
                .delete(api::delete_context),
        )
        .route("/api/contexts/{name}/cxt", get(api::get_cxt))
        .route("/api/contexts/{name}/cell", post(api::post_cell))
        .route("/api/contexts/{name}/lattice", get(api::get_lattice))
        .route(
            "/api/contexts/{name}/lattice/positions",
            post(api::post_positions),
        )
        .route("/api/contexts/{name}/implications", get(api::get_implications))
        .route("/api/explore/{id}", get(api::get_session))
        .route("/api/explore/{id}/start", post(api::start_session))
        .route("/api/explore/{id}/accept", post(api::accept))
        .route("/api/explore/{id}/counterexample", post(api::counterexample))
        .route("/api/explore/{id}/save", post(api::save_result))
        .fallback(static_asset)
        .with_state(state)
}

/// Serves until ctrl-c.
pub async fn serve(listener: tokio::net::TcpListener, config: &ServiceConfig) -> std::io::Result<()> {
    let state = AppState::new(config)?;
    if let Ok(addr) = listener.local_addr() {
        log::info!("serving {} on http://{addr}", config.workspace.display());
    }
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

pub async fn bind(addr: SocketAddr) -> std::io::Result<tokio::net::TcpListener> {
    tokio::net::TcpListener::bind(addr).await
}

const PLACEHOLDER_INDEX: &str = "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>fcakit</title></head>\n<body><h1>fcakit</h1><p>The web UI assets are not installed. Start the service with <code>--ui-dir</code> pointing at the built UI, or use the JSON API under <code>/api</code>.</p></body></html>\n";

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js") | Some("mjs") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        Some("ico") => "image/x-icon",
        Some("wasm") => "application/wasm",
        _ => "application/octet-stream",
    }
}

async fn static_asset(axum::extract::State(state): axum::extract::State<AppState>, uri: Uri) -> Response {
    let path = uri.path();
    if path.starts_with("/api/") {
        return api::ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no route {path}"))
            .into_response();
    }
    let relative = path.trim_start_matches('/');
    let relative = if relative.is_empty() { "index.html" } else { relative };
    let rel_path = Path::new(relative);
    let safe = rel_path
        .components()
        .all(|c| matches!(c, Component::Normal(_)));
    if let (Some(dir), true) = (&state.0.ui_dir, safe) {
        let file = dir.join(rel_path);
        if let Ok(bytes) = tokio::fs::read(&file).await {
            return ([(header::CONTENT_TYPE, content_type(&file))], bytes).into_response();
        }
    }
    if relative == "index.html" {
        return (
            [(header::CONTENT_TYPE, "text/html; charset=utf-8")],
            PLACEHOLDER_INDEX,
        )
            .into_response();
    }
    (StatusCode::NOT_FOUND, "not found").into_response()
}
