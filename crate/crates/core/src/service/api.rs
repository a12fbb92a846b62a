//! JSON request handlers.

use std::collections::BTreeMap;
use std::sync::atomic::Ordering;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::workspace::WorkspaceError;
use super::{AppState, SessionHandle};
use crate::context::{ContextTable, FormalContext};
use crate::cxt::{parse_cxt, write_cxt};
use crate::exploration::{question_sentence, ExplorationError, ExplorationSession};
use crate::implications::{conclusion_names, premise_names, render_implication, stem_base, Colour};
use crate::lattice::{ConceptLattice, LatticeError};
use crate::layout::{build_scene, DiagramScene, Position};

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
    extra: Map<String, Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            kind,
            message: message.into(),
            extra: Map::new(),
        }
    }

    fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_owned(), value.into());
        self
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn no_context(name: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("no context named {name:?}"))
    }

    fn busy(message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, "conflict", message)
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = self.extra;
        body.insert("error".into(), self.kind.into());
        body.insert("message".into(), self.message.into());
        (self.status, Json(Value::Object(body))).into_response()
    }
}

impl From<WorkspaceError> for ApiError {
    fn from(e: WorkspaceError) -> Self {
        match e {
            WorkspaceError::InvalidName(_) => ApiError::bad_request(e.to_string()),
            _ => {
                log::error!("{e}");
                ApiError::internal(e.to_string())
            }
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn load(state: &AppState, name: &str) -> ApiResult<FormalContext> {
    state
        .workspace()
        .load_context(name)?
        .ok_or_else(|| ApiError::no_context(name))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(format!("worker failed: {e}")))
}

fn context_body(state: &AppState, name: &str, ctx: &FormalContext) -> Value {
    let table = ctx.to_table();
    let limit = state.0.max_concepts;
    let count = ctx.concepts().take(limit + 1).count();
    let concept_count = if count > limit { Value::Null } else { count.into() };
    json!({
        "name": name,
        "objects": table.objects,
        "attributes": table.attributes,
        "incidence": table.incidence,
        "crosses": ctx.cross_count(),
        "concept_count": concept_count,
    })
}

pub async fn health() -> Json<Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

pub async fn list_contexts(State(state): State<AppState>) -> ApiResult<Json<Vec<String>>> {
    Ok(Json(state.workspace().list_contexts()?))
}

pub async fn get_context(State(state): State<AppState>, Path(name): Path<String>) -> ApiResult<Json<Value>> {
    let ctx = load(&state, &name)?;
    Ok(Json(context_body(&state, &name, &ctx)))
}

pub async fn get_cxt(State(state): State<AppState>, Path(name): Path<String>) -> ApiResult<Response> {
    let ctx = load(&state, &name)?;
    Ok((
        [(header::CONTENT_TYPE, "text/plain; charset=utf-8")],
        write_cxt(&ctx),
    )
        .into_response())
}

/// Accepts a CXT document, or a JSON table when the content type says so.
/// `If-None-Match: *` refuses to overwrite an existing context.
pub async fn put_context(
    State(state): State<AppState>,
    Path(name): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult<Response> {
    let is_json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.contains("json"));
    let ctx = if is_json {
        let table: ContextTable = serde_json::from_slice(&body)
            .map_err(|e| ApiError::bad_request(format!("invalid table: {e}")))?;
        FormalContext::from_table(&table).map_err(|e| ApiError::bad_request(e.to_string()))?
    } else {
        parse_cxt(&body).map_err(|e| ApiError::bad_request(e.to_string()))?
    };
    let create_only = headers
        .get(header::IF_NONE_MATCH)
        .is_some_and(|v| v.as_bytes() == b"*");

    let lock = state.context_lock(&name);
    let _guard = lock.lock().await;
    let existed = state.workspace().context_exists(&name)?;
    if existed && create_only {
        return Err(ApiError::busy(format!("context {name:?} already exists")));
    }
    if state.workspace().save_context(&name, &ctx)? {
        state.bump(&name);
    }
    let status = if existed { StatusCode::OK } else { StatusCode::CREATED };
    Ok((status, Json(context_body(&state, &name, &ctx))).into_response())
}

pub async fn delete_context(State(state): State<AppState>, Path(name): Path<String>) -> ApiResult<StatusCode> {
    let lock = state.context_lock(&name);
    let _guard = lock.lock().await;
    if state.workspace().delete_context(&name)? {
        state.bump(&name);
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::no_context(&name))
    }
}

#[derive(Debug, Deserialize)]
pub struct CellEdit {
    object: usize,
    attribute: usize,
    value: bool,
}

pub async fn post_cell(
    State(state): State<AppState>,
    Path(name): Path<String>,
    Json(edit): Json<CellEdit>,
) -> ApiResult<Json<Value>> {
    let lock = state.context_lock(&name);
    let _guard = lock.lock().await;
    let ctx = load(&state, &name)?
        .set_incidence(edit.object, edit.attribute, edit.value)
        .map_err(|e| ApiError::bad_request(e.to_string()))?;
    if state.workspace().save_context(&name, &ctx)? {
        state.bump(&name);
    }
    Ok(Json(context_body(&state, &name, &ctx)))
}

/// Builds the scene on a blocking worker. The build is abandoned when the
/// context changes while it runs.
async fn scene_for(state: &AppState, name: &str, ctx: FormalContext) -> ApiResult<DiagramScene> {
    let generation = state.generation(name);
    let started = generation.load(Ordering::SeqCst);
    let max = state.0.max_concepts;
    let built = blocking(move || {
        ConceptLattice::build_bounded(&ctx, max, &|| generation.load(Ordering::SeqCst) != started)
            .map(|lat| build_scene(&lat))
    })
    .await?;
    built.map_err(|e| match e {
        LatticeError::TooLarge { at_least } => ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "too_large",
            format!("the lattice has at least {at_least} concepts (limit {max})"),
        )
        .with("concepts_at_least", at_least),
        LatticeError::Cancelled => ApiError::busy("context changed during computation"),
        other => ApiError::internal(other.to_string()),
    })
}

pub async fn get_lattice(State(state): State<AppState>, Path(name): Path<String>) -> ApiResult<Json<DiagramScene>> {
    let ctx = load(&state, &name)?;
    let pins = state.workspace().load_pins(&name)?;
    let mut scene = scene_for(&state, &name, ctx).await?;
    scene.apply_pins(&pins);
    Ok(Json(scene))
}

/// Sets (or with `null` clears) manual positions keyed by intent.
pub async fn post_positions(
    State(state): State<AppState>,
    Path(name): Path<String>,
    Json(update): Json<BTreeMap<String, Option<Position>>>,
) -> ApiResult<Json<DiagramScene>> {
    let lock = state.context_lock(&name);
    let _guard = lock.lock().await;
    let ctx = load(&state, &name)?;
    let mut scene = scene_for(&state, &name, ctx).await?;
    if let Some(key) = update
        .keys()
        .find(|k| !scene.nodes.iter().any(|n| &n.key == *k))
    {
        return Err(
            ApiError::bad_request(format!("no concept has intent {key}")).with("intent", key.as_str())
        );
    }
    let mut pins = state.workspace().load_pins(&name)?;
    for (key, pos) in update {
        match pos {
            Some(p) => {
                pins.insert(key, p);
            }
            None => {
                pins.remove(&key);
            }
        }
    }
    state.workspace().save_pins(&name, &pins)?;
    scene.apply_pins(&pins);
    Ok(Json(scene))
}

pub async fn get_implications(State(state): State<AppState>, Path(name): Path<String>) -> ApiResult<Json<Value>> {
    let ctx = load(&state, &name)?;
    let rows = blocking(move || {
        stem_base(&ctx)
            .iter()
            .map(|r| {
                let imp = &r.implication;
                json!({
                    "id": r.id,
                    "support": r.support,
                    "premise": premise_names(&ctx, imp),
                    "conclusion": conclusion_names(&ctx, imp),
                    "valid": r.valid,
                    "colour": match r.colour() {
                        Colour::Blue => "blue",
                        Colour::Red => "red",
                    },
                    "text": render_implication(&ctx, imp),
                })
            })
            .collect::<Vec<_>>()
    })
    .await?;
    Ok(Json(Value::Array(rows)))
}

fn session_state(id: &str, s: &ExplorationSession) -> Value {
    let ctx = s.context();
    let question = s.question().map(|q| {
        json!({
            "premise": premise_names(ctx, q),
            "conclusion": conclusion_names(ctx, q),
            "text": render_implication(ctx, q),
            "sentence": question_sentence(ctx, q),
        })
    });
    let accepted: Vec<Value> = s
        .accepted()
        .iter()
        .map(|imp| {
            json!({
                "premise": premise_names(ctx, imp),
                "conclusion": conclusion_names(ctx, imp),
                "text": render_implication(ctx, imp),
            })
        })
        .collect();
    let table = ctx.to_table();
    json!({
        "session": id,
        "finished": s.is_finished(),
        "question": question,
        "accepted": accepted,
        "objects": table.objects,
        "attributes": table.attributes,
        "incidence": table.incidence,
    })
}

/// The cached session, or the one rebuilt from its log after a restart.
fn session(state: &AppState, id: &str) -> ApiResult<SessionHandle> {
    if let Some(h) = state.cached_session(id) {
        return Ok(h);
    }
    let s = state
        .workspace()
        .load_session(id)?
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no session {id:?}")))?;
    Ok(state.cache_session(id, s))
}

/// Starts exploring the context named by the path.
pub async fn start_session(State(state): State<AppState>, Path(name): Path<String>) -> ApiResult<Response> {
    let ctx = load(&state, &name)?;
    let s = ExplorationSession::start(&ctx);
    let _ids = state.0.session_ids.lock().await;
    let id = state.workspace().new_session_id(&name)?;
    state.workspace().append_events(&id, s.log())?;
    let body = session_state(&id, &s);
    state.cache_session(&id, s);
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

pub async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let handle = session(&state, &id)?;
    let s = handle.lock().await;
    Ok(Json(session_state(&id, &s)))
}

/// Applies `step` to a copy of the session, persists the new log entries,
/// then commits. Concurrent mutations of one session get 409.
async fn mutate(
    state: &AppState,
    id: &str,
    step: impl FnOnce(&mut ExplorationSession) -> ApiResult<()>,
) -> ApiResult<Json<Value>> {
    let handle = session(state, id)?;
    let mut guard = handle
        .try_lock()
        .map_err(|_| ApiError::busy(format!("session {id:?} is being modified")))?;
    let mut next = guard.clone();
    step(&mut next)?;
    state
        .workspace()
        .append_events(id, &next.log()[guard.log().len()..])?;
    *guard = next;
    Ok(Json(session_state(id, &guard)))
}

fn exploration_error(e: ExplorationError) -> ApiError {
    match e {
        ExplorationError::NoPendingQuestion => ApiError::busy(e.to_string()),
        ExplorationError::NotFinished => ApiError::busy(e.to_string()),
        ExplorationError::ViolatesAcceptedImplication { ref implication, .. } => {
            let implication = implication.clone();
            ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_counterexample", e.to_string())
                .with("violates", implication)
        }
        _ => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_counterexample", e.to_string()),
    }
}

pub async fn accept(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    mutate(&state, &id, |s| s.accept().map_err(exploration_error)).await
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum AttributeRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Deserialize)]
pub struct Counterexample {
    name: String,
    attributes: Vec<AttributeRef>,
}

pub async fn counterexample(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(body): Json<Counterexample>,
) -> ApiResult<Json<Value>> {
    mutate(&state, &id, |s| {
        let ctx = s.context();
        let mut indices = Vec::with_capacity(body.attributes.len());
        for a in &body.attributes {
            match a {
                AttributeRef::Index(i) => indices.push(*i),
                AttributeRef::Name(n) => indices.push(ctx.attribute_index(n).ok_or_else(|| {
                    ApiError::new(
                        StatusCode::UNPROCESSABLE_ENTITY,
                        "invalid_counterexample",
                        format!("unknown attribute {n:?}"),
                    )
                })?),
            }
        }
        let intent = crate::BitSet::from_indices(ctx.attribute_count(), indices).map_err(|i| {
            ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "invalid_counterexample",
                format!("attribute index {i} out of range"),
            )
        })?;
        s.reject_with_counterexample(&body.name, &intent)
            .map_err(exploration_error)
    })
    .await
}

#[derive(Debug, Default, Deserialize)]
pub struct SaveRequest {
    name: Option<String>,
}

/// Stores the enlarged context of a finished session, by default under the
/// name of the context it was started from.
pub async fn save_result(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Option<Json<SaveRequest>>,
) -> ApiResult<Response> {
    let handle = session(&state, &id)?;
    let ctx = {
        let s = handle.lock().await;
        s.result().map_err(exploration_error)?.0
    };
    let name = match body.and_then(|Json(b)| b.name) {
        Some(n) => n,
        None => id.rsplit_once('-').map(|(n, _)| n.to_owned()).unwrap_or(id.clone()),
    };
    let lock = state.context_lock(&name);
    let _guard = lock.lock().await;
    let existed = state.workspace().context_exists(&name)?;
    if state.workspace().save_context(&name, &ctx)? {
        state.bump(&name);
    }
    let status = if existed { StatusCode::OK } else { StatusCode::CREATED };
    Ok((status, Json(context_body(&state, &name, &ctx))).into_response())
}
