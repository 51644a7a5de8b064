//! HTTP+JSON front of the session store.
//!
//! ```text
//! POST /game              {seed?, config?}  -> {id, world}
//! POST /game/{id}/key     {key}             -> {world, over}
//! POST /game/{id}/tick                      -> {world, over}
//! GET  /game/{id}/scene                     -> scene
//! GET  /game/{id}                           -> {world, over, tick_count}
//! ```
//!
//! Errors are `{error}` with 400 for bad requests and 404 for unknown ids.

use std::path::Path as FsPath;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use recipe_core::game::GameConfig;
use recipe_core::service::{ServiceError, SessionStore};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<SessionStore>,
    pub config: Arc<GameConfig>,
}

impl AppState {
    pub fn new(config: GameConfig, idle_timeout: Duration) -> Self {
        Self { store: Arc::new(SessionStore::new(idle_timeout)), config: Arc::new(config) }
    }
}

impl Default for AppState {
    fn default() -> Self {
        Self::new(GameConfig::default(), recipe_core::service::DEFAULT_IDLE_TIMEOUT)
    }
}

pub fn router(state: AppState, static_dir: Option<&FsPath>) -> Router {
    let api = Router::new()
        .route("/game", post(create))
        .route("/game/:id", get(status))
        .route("/game/:id/key", post(key))
        .route("/game/:id/tick", post(tick))
        .route("/game/:id/scene", get(scene))
        .with_state(state);
    let app = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(CorsLayer::permissive())
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        let status = match e {
            ServiceError::InvalidConfig(_) => StatusCode::BAD_REQUEST,
            ServiceError::UnknownSession(_) => StatusCode::NOT_FOUND,
        };
        ApiError(status, e.to_string())
    }
}

fn bad_request(message: impl Into<String>) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, message.into())
}

/// Parses a JSON object body; an empty body reads as `{}`.
fn object(body: &Bytes) -> Result<serde_json::Map<String, Value>, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(serde_json::Map::new());
    }
    match serde_json::from_slice(body) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(bad_request("request body must be a JSON object")),
        Err(e) => Err(bad_request(format!("invalid JSON: {e}"))),
    }
}

/// Request overrides layered over the server's configuration.
fn merged_config(base: &GameConfig, overrides: Option<&Value>) -> Result<GameConfig, ApiError> {
    let Some(overrides) = overrides else { return Ok(base.clone()) };
    let Value::Object(fields) = overrides else {
        return Err(bad_request("config must be a JSON object"));
    };
    let mut merged = serde_json::to_value(base).expect("config serializes");
    let target = merged.as_object_mut().expect("config is an object");
    for (k, v) in fields {
        target.insert(k.clone(), v.clone());
    }
    serde_json::from_value(merged).map_err(|e| bad_request(format!("invalid game configuration: {e}")))
}

fn clock_seed() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0)
}

async fn create(State(state): State<AppState>, body: Bytes) -> Result<Json<Value>, ApiError> {
    let req = object(&body)?;
    let seed = match req.get("seed") {
        None | Some(Value::Null) => clock_seed(),
        Some(v) => v.as_u64().ok_or_else(|| bad_request("seed must be a non-negative 64-bit integer"))?,
    };
    let config = merged_config(&state.config, req.get("config"))?;
    Ok(Json(state.store.create(seed, config)?))
}

async fn key(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Json<Value>, ApiError> {
    let req = object(&body)?;
    let key = req.get("key").and_then(Value::as_str).ok_or_else(|| bad_request("missing string field `key`"))?;
    Ok(Json(state.store.key(&id, key)?))
}

async fn tick(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    Ok(Json(state.store.tick(&id)?))
}

async fn scene(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    Ok(Json(state.store.scene(&id)?))
}

async fn status(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    Ok(Json(state.store.status(&id)?))
}
