//! HTTP service over dialogue sessions.
//!
//! Every session owns a private copy of a knowledge base. Utterances are
//! the only way to change it; the GET endpoints are read-only views.
//!
//! | Method | Path                           | Body / result                          |
//! |--------|--------------------------------|----------------------------------------|
//! | POST   | `/session`                     | `{kb?, speaker?, addressee?}` -> id    |
//! | POST   | `/session/{id}/utterance`      | `{text}` -> `{response, delta, at}`    |
//! | GET    | `/session/{id}/graph`          | nodes and solid/dashed edges           |
//! | GET    | `/session/{id}/spm`            | layers, matrices and scope tree        |
//! | GET    | `/session/{id}/entity/{name}`  | full record history of one entity      |
//! | GET    | `/session/{id}/transcript`     | every turn so far                      |

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use infoarch::dialogue::RecordChange;
use infoarch::kbstore::{KnowledgeBase, SpmDoc};
use infoarch::memory::{AttributeRecord, EntityKind};
use infoarch::{NodeId, Session, TranscriptEntry};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

/// A JSON error body with its status.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn not_found(what: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, what)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// Shared server state: the knowledge base new sessions start from and the
/// live sessions. Each session has its own lock, so requests to one session
/// are serialized while different sessions proceed independently.
#[derive(Clone)]
pub struct AppState {
    template: Arc<KnowledgeBase>,
    sessions: Arc<Mutex<HashMap<Uuid, Arc<Mutex<Session>>>>>,
}

impl AppState {
    pub fn new(template: KnowledgeBase) -> Self {
        Self {
            template: Arc::new(template),
            sessions: Arc::default(),
        }
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let unknown = || ApiError::not_found(format!("no session {id}"));
        let id = Uuid::parse_str(id).map_err(|_| unknown())?;
        lock(&self.sessions).get(&id).cloned().ok_or_else(unknown)
    }

    /// Number of live sessions.
    pub fn session_count(&self) -> usize {
        lock(&self.sessions).len()
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewSession {
    /// A bundled knowledge base ("queen" or "house"); the server default
    /// when absent.
    #[serde(default)]
    pub kb: Option<String>,
    #[serde(default)]
    pub speaker: Option<String>,
    #[serde(default)]
    pub addressee: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionCreated {
    pub id: Uuid,
    pub speaker: NodeId,
    pub addressee: NodeId,
}

#[derive(Debug, Deserialize)]
pub struct Utterance {
    pub text: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UtteranceReply {
    pub response: String,
    pub delta: Vec<RecordChange>,
    pub at: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphNode {
    pub name: NodeId,
    pub kind: Option<EntityKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeStyle {
    Solid,
    Dashed,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: NodeId,
    pub space: String,
    pub to: NodeId,
    pub style: EdgeStyle,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphView {
    pub center: Option<NodeId>,
    pub vice_centers: Vec<NodeId>,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EntityView {
    pub name: NodeId,
    pub kind: Option<EntityKind>,
    pub records: Vec<AttributeRecord>,
    pub spm_layer: Option<i32>,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}/utterance", post(post_utterance))
        .route("/session/{id}/graph", get(get_graph))
        .route("/session/{id}/spm", get(get_spm))
        .route("/session/{id}/entity/{name}", get(get_entity))
        .route("/session/{id}/transcript", get(get_transcript))
        .with_state(state)
}

async fn create_session(
    State(state): State<AppState>,
    body: Option<Json<NewSession>>,
) -> Result<(StatusCode, Json<SessionCreated>), ApiError> {
    let req = body.map(|Json(b)| b).unwrap_or_default();
    let kb = match req.kb.as_deref() {
        None => (*state.template).clone(),
        Some(name) => KnowledgeBase::bundled_text(name)
            .map(|text| KnowledgeBase::from_json(text, None).expect("bundled files are valid"))
            .ok_or_else(|| ApiError::not_found(format!("no bundled knowledge base {name:?}")))?,
    };
    let session = Session::with_participants(kb, req.speaker.map(NodeId::new), req.addressee.map(NodeId::new))
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    let id = Uuid::new_v4();
    let created = SessionCreated {
        id,
        speaker: session.ctx.speaker.clone(),
        addressee: session.ctx.addressee.clone(),
    };
    lock(&state.sessions).insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(created)))
}

async fn post_utterance(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Option<Json<Utterance>>,
) -> ApiResult<UtteranceReply> {
    let session = state.session(&id)?;
    let text = body.map(|Json(u)| u.text).unwrap_or_default();
    if text.trim().is_empty() {
        return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "utterance text is empty"));
    }
    let mut session = lock(&session);
    let entry = session.utter(&text);
    Ok(Json(UtteranceReply {
        response: entry.turn.response.clone(),
        delta: entry.turn.delta.clone(),
        at: infoarch::memory::format_timestamp(&entry.turn.at),
    }))
}

async fn get_graph(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<GraphView> {
    let session = state.session(&id)?;
    let session = lock(&session);
    let g = &session.kb.memory.graph;
    let edges = g
        .solid_edges()
        .into_iter()
        .map(|e| (e, EdgeStyle::Solid))
        .chain(g.dashed_edges().into_iter().map(|e| (e, EdgeStyle::Dashed)))
        .map(|(e, style)| GraphEdge {
            from: e.from,
            space: e.space,
            to: e.to,
            style,
        })
        .collect();
    Ok(Json(GraphView {
        center: g.center.clone(),
        vice_centers: g.vice_centers.iter().cloned().collect(),
        nodes: g
            .nodes()
            .map(|(name, kind)| GraphNode {
                name: name.clone(),
                kind,
            })
            .collect(),
        edges,
    }))
}

async fn get_spm(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<SpmDoc> {
    let session = state.session(&id)?;
    let session = lock(&session);
    Ok(Json(session.kb.to_document().spm))
}

async fn get_entity(State(state): State<AppState>, Path((id, name)): Path<(String, String)>) -> ApiResult<EntityView> {
    let session = state.session(&id)?;
    let session = lock(&session);
    let kb = &session.kb;
    let node = kb
        .memory
        .find(&name)
        .cloned()
        .ok_or_else(|| ApiError::not_found(format!("no entity {name:?}")))?;
    let mut records = kb.memory.sheet(&node).map(|s| s.records.clone()).unwrap_or_default();
    records.sort_by(|a, b| (&a.space, a.cts).cmp(&(&b.space, b.cts)));
    Ok(Json(EntityView {
        kind: kb.memory.graph.kind(&node),
        spm_layer: kb.spm.layer_of(&node),
        name: node,
        records,
    }))
}

async fn get_transcript(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Vec<TranscriptEntry>> {
    let session = state.session(&id)?;
    let session = lock(&session);
    Ok(Json(session.transcript.clone()))
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}
