//! HTTP JSON service. All endpoints are GET; ranking work runs on the
//! blocking pool so a slow author-centrality request never stalls others.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use bibliorank_core::{Index, RerankError, Stratagem};
use serde::Serialize;
use serde_json::json;
use tower_http::cors::{Any, CorsLayer};

use crate::inspect::{graph_export, run_search, zone_report, QueryError};

pub const DEFAULT_LIMIT: usize = 20;
pub const MAX_LIMIT: usize = 1000;

pub struct AppState {
    pub index: Index,
    pub node_cap: usize,
}

pub fn router(state: Arc<AppState>) -> Router {
    let cors = CorsLayer::new().allow_origin(Any).allow_methods([Method::GET]);
    Router::new()
        .route("/search", get(search))
        .route("/zones", get(zones))
        .route("/graph", get(graph))
        .route("/documents/{id}", get(document))
        .route("/health", get(health))
        .layer(cors)
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

fn bad_request(msg: impl Into<String>) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, msg.into())
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        match e {
            QueryError::EmptyQuery => bad_request("empty query"),
            QueryError::Rerank(RerankError::GraphTooLarge { nodes, cap }) => ApiError(
                StatusCode::SERVICE_UNAVAILABLE,
                format!("GraphTooLarge: co-authorship graph has {nodes} nodes, above the node cap of {cap}"),
            ),
            QueryError::Rerank(e @ RerankError::UnknownDoc(_)) => {
                ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
            }
        }
    }
}

type Params = Query<HashMap<String, String>>;

fn query_text(params: &HashMap<String, String>) -> Result<String, ApiError> {
    match params.get("q") {
        Some(q) if !q.trim().is_empty() => Ok(q.clone()),
        _ => Err(bad_request("empty query")),
    }
}

fn paging(params: &HashMap<String, String>) -> Result<(usize, usize), ApiError> {
    let limit = match params.get("limit") {
        None => DEFAULT_LIMIT,
        Some(v) => v
            .parse::<usize>()
            .ok()
            .filter(|l| (1..=MAX_LIMIT).contains(l))
            .ok_or_else(|| bad_request(format!("limit must be an integer in 1..={MAX_LIMIT}")))?,
    };
    let offset = match params.get("offset") {
        None => 0,
        Some(v) => v
            .parse::<usize>()
            .map_err(|_| bad_request("offset must be a non-negative integer"))?,
    };
    Ok((offset, limit))
}

/// Run `work` against the shared index on the blocking pool.
async fn compute<T, F>(state: Arc<AppState>, work: F) -> Result<Json<T>, ApiError>
where
    T: Serialize + Send + 'static,
    F: FnOnce(&AppState) -> Result<T, QueryError> + Send + 'static,
{
    tokio::task::spawn_blocking(move || work(&state))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map(Json)
        .map_err(ApiError::from)
}

async fn search(State(state): State<Arc<AppState>>, Query(params): Params) -> Result<impl IntoResponse, ApiError> {
    let q = query_text(&params)?;
    let stratagem = match params.get("rank") {
        None => Stratagem::Tfidf,
        Some(r) => r.parse::<Stratagem>().map_err(|_| bad_request("unknown rank"))?,
    };
    let (offset, limit) = paging(&params)?;
    compute(state, move |s| run_search(&s.index, &q, stratagem, offset, limit, s.node_cap)).await
}

async fn zones(State(state): State<Arc<AppState>>, Query(params): Params) -> Result<impl IntoResponse, ApiError> {
    let q = query_text(&params)?;
    compute(state, move |s| zone_report(&s.index, &q)).await
}

async fn graph(State(state): State<Arc<AppState>>, Query(params): Params) -> Result<impl IntoResponse, ApiError> {
    let q = query_text(&params)?;
    compute(state, move |s| graph_export(&s.index, &q, s.node_cap)).await
}

async fn document(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    state
        .index
        .doc(&id)
        .map(|d| Json(d.record.clone()))
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("unknown document `{id}`")))
}

async fn health(State(state): State<Arc<AppState>>) -> impl IntoResponse {
    Json(json!({ "status": "ok", "doc_count": state.index.doc_count() }))
}
