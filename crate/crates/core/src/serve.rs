//! JSON-over-HTTP mutation sessions.
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | POST | `/session` | seed JSON or family spec | `201 {"id": ...}` |
//! | GET | `/session/{id}` | | session view |
//! | POST | `/session/{id}/mutate` | `{"k": 1}` | view plus `new_variable` |
//! | POST | `/session/{id}/undo` | | view |
//! | DELETE | `/session/{id}` | | `204` |
//!
//! Errors are `{"error": ...}` with status 404 (unknown or expired
//! session), 409 (frozen vertex, nothing to undo) or 422 (malformed input).

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::builders::FamilySpec;
use crate::laurent::VarContext;
use crate::seed::{Seed, SeedError, SeedJson};

pub const DEFAULT_PORT: u16 = 7878;
pub const PORT_ENV: &str = "CLUSTERLAB_PORT";

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub port: u16,
    pub state_dir: Option<PathBuf>,
    pub idle_timeout: Duration,
}

impl Default for ServeConfig {
    fn default() -> Self {
        ServeConfig {
            port: DEFAULT_PORT,
            state_dir: None,
            idle_timeout: Duration::from_secs(30 * 60),
        }
    }
}

struct Session {
    /// Seeds from creation to now; the last one is current.
    history: Vec<Seed>,
    last_used: Instant,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    sessions: Mutex<HashMap<u64, Arc<tokio::sync::Mutex<Session>>>>,
    next_id: AtomicU64,
    state_dir: Option<PathBuf>,
    idle_timeout: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub seed: SeedJson,
    pub variables: Vec<String>,
    pub frozen: Vec<bool>,
    pub history: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_variable: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    history: Vec<SeedJson>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CreateRequest {
    Family(FamilySpec),
    Seed(SeedJson),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MutateRequest {
    k: usize,
}

#[derive(Debug)]
struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(serde_json::json!({ "error": self.1 }))).into_response()
    }
}

fn unprocessable(msg: impl ToString) -> ApiError {
    ApiError(StatusCode::UNPROCESSABLE_ENTITY, msg.to_string())
}

fn view(id: u64, session: &Session, new_variable: Option<String>) -> SessionView {
    let seed = session.history.last().expect("history is never empty");
    let json = seed.to_json();
    SessionView {
        id: id.to_string(),
        variables: json.vars.clone().unwrap_or_default(),
        frozen: (0..seed.n()).map(|v| seed.quiver().is_frozen(v)).collect(),
        history: session.history.len() - 1,
        seed: json,
        new_variable,
    }
}

impl AppState {
    pub fn new(config: &ServeConfig) -> Self {
        let state = AppState {
            inner: Arc::new(Inner {
                sessions: Mutex::new(HashMap::new()),
                next_id: AtomicU64::new(1),
                state_dir: config.state_dir.clone(),
                idle_timeout: config.idle_timeout,
            }),
        };
        if let Some(dir) = &config.state_dir {
            state.load_snapshots(dir);
        }
        state
    }

    fn load_snapshots(&self, dir: &Path) {
        let Ok(entries) = std::fs::read_dir(dir) else { return };
        let mut max_id = 0;
        for entry in entries.flatten() {
            let path = entry.path();
            let Some(id) = path
                .file_stem()
                .and_then(|s| s.to_str())
                .and_then(|s| s.parse::<u64>().ok())
            else {
                continue;
            };
            let loaded = std::fs::read_to_string(&path)
                .ok()
                .and_then(|text| serde_json::from_str::<Snapshot>(&text).ok())
                .and_then(|snap| snap.history.iter().map(|j| Seed::from_json(j).ok()).collect::<Option<Vec<_>>>())
                .filter(|h| !h.is_empty());
            match loaded {
                Some(history) => {
                    max_id = max_id.max(id);
                    self.inner.sessions.lock().unwrap().insert(
                        id,
                        Arc::new(tokio::sync::Mutex::new(Session {
                            history,
                            last_used: Instant::now(),
                        })),
                    );
                }
                None => log::warn!("ignoring unreadable snapshot {}", path.display()),
            }
        }
        self.inner.next_id.store(max_id + 1, Ordering::SeqCst);
    }

    fn snapshot(&self, id: u64, session: &Session) {
        let Some(dir) = &self.inner.state_dir else { return };
        let snap = Snapshot {
            history: session.history.iter().map(|s| s.to_json()).collect(),
        };
        let path = dir.join(format!("{id}.json"));
        let result = std::fs::create_dir_all(dir)
            .and_then(|_| std::fs::write(&path, serde_json::to_vec(&snap).expect("snapshot serializes")));
        if let Err(e) = result {
            log::warn!("could not write snapshot {}: {e}", path.display());
        }
    }

    fn remove_snapshot(&self, id: u64) {
        if let Some(dir) = &self.inner.state_dir {
            let _ = std::fs::remove_file(dir.join(format!("{id}.json")));
        }
    }

    fn insert(&self, seed: Seed) -> u64 {
        let id = self.inner.next_id.fetch_add(1, Ordering::SeqCst);
        let session = Session {
            history: vec![seed],
            last_used: Instant::now(),
        };
        self.snapshot(id, &session);
        self.inner
            .sessions
            .lock()
            .unwrap()
            .insert(id, Arc::new(tokio::sync::Mutex::new(session)));
        id
    }

    async fn get(&self, id: &str) -> Result<(u64, Arc<tokio::sync::Mutex<Session>>), ApiError> {
        let missing = || ApiError(StatusCode::NOT_FOUND, format!("no session {id}"));
        let num: u64 = id.parse().map_err(|_| missing())?;
        let session = self.inner.sessions.lock().unwrap().get(&num).cloned().ok_or_else(missing)?;
        let expired = session.lock().await.last_used.elapsed() > self.inner.idle_timeout;
        if expired {
            self.remove(num);
            return Err(missing());
        }
        Ok((num, session))
    }

    fn remove(&self, id: u64) -> bool {
        let removed = self.inner.sessions.lock().unwrap().remove(&id).is_some();
        self.remove_snapshot(id);
        removed
    }

    /// Drops sessions idle for longer than the configured timeout.
    pub async fn expire_idle(&self) -> usize {
        let all: Vec<(u64, Arc<tokio::sync::Mutex<Session>>)> =
            self.inner.sessions.lock().unwrap().iter().map(|(k, v)| (*k, v.clone())).collect();
        let mut dropped = 0;
        for (id, s) in all {
            if s.lock().await.last_used.elapsed() > self.inner.idle_timeout {
                self.remove(id);
                dropped += 1;
            }
        }
        dropped
    }

    pub fn session_count(&self) -> usize {
        self.inner.sessions.lock().unwrap().len()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}", get(get_session).delete(delete_session))
        .route("/session/{id}/mutate", post(mutate_session))
        .route("/session/{id}/undo", post(undo_session))
        .with_state(state)
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = serde_json::from_slice(&body).map_err(|_| {
        unprocessable("body must be a seed ({\"n\":..,\"arrows\":..}) or a family spec ({\"family\":..})")
    })?;
    let seed = match req {
        CreateRequest::Family(spec) => spec.build().map_err(unprocessable)?,
        CreateRequest::Seed(json) => Seed::from_json(&json).map_err(unprocessable)?,
    };
    let id = state.insert(seed);
    Ok((StatusCode::CREATED, Json(serde_json::json!({ "id": id.to_string() }))).into_response())
}

async fn get_session(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<SessionView>, ApiError> {
    let (num, s) = state.get(&id).await?;
    let mut session = s.lock().await;
    session.last_used = Instant::now();
    Ok(Json(view(num, &session, None)))
}

async fn mutate_session(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Result<Json<SessionView>, ApiError> {
    let (num, s) = state.get(&id).await?;
    let req: MutateRequest = serde_json::from_slice(&body).map_err(|_| unprocessable("body must be {\"k\": <1-based vertex>}"))?;
    let mut session = s.lock().await;
    session.last_used = Instant::now();
    let current = session.history.last().expect("history is never empty");
    if req.k == 0 || req.k > current.n() {
        return Err(unprocessable(format!("vertex {} does not exist", req.k)));
    }
    let k = req.k - 1;
    let next = match current.mutate(k) {
        Ok(s) => s,
        Err(e @ SeedError::FrozenVertex(_)) => return Err(ApiError(StatusCode::CONFLICT, e.to_string())),
        Err(e) => return Err(unprocessable(e)),
    };
    let ctx = VarContext::standard(next.ambient_rank());
    let new_variable = next.var(k).display(&ctx).to_string();
    session.history.push(next);
    state.snapshot(num, &session);
    Ok(Json(view(num, &session, Some(new_variable))))
}

async fn undo_session(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<SessionView>, ApiError> {
    let (num, s) = state.get(&id).await?;
    let mut session = s.lock().await;
    session.last_used = Instant::now();
    if session.history.len() < 2 {
        return Err(ApiError(StatusCode::CONFLICT, "nothing to undo".into()));
    }
    session.history.pop();
    state.snapshot(num, &session);
    Ok(Json(view(num, &session, None)))
}

async fn delete_session(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<StatusCode, ApiError> {
    let (num, _) = state.get(&id).await?;
    state.remove(num);
    Ok(StatusCode::NO_CONTENT)
}

/// Binds `127.0.0.1:port` and serves until the process is stopped. Idle
/// sessions are swept once a minute (or per timeout, if shorter).
pub async fn serve(config: ServeConfig) -> std::io::Result<()> {
    let state = AppState::new(&config);
    let sweeper = state.clone();
    let period = config.idle_timeout.min(Duration::from_secs(60)).max(Duration::from_millis(100));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            let n = sweeper.expire_idle().await;
            if n > 0 {
                log::info!("expired {n} idle session(s)");
            }
        }
    });
    let addr = SocketAddr::from(([127, 0, 0, 1], config.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}

#[cfg(test)]
mod tests {
    use super::*;
    use axum::body::Body;
    use axum::http::Request;
    use http_body_util::BodyExt;
    use tower::ServiceExt;

    async fn call(app: &Router, method: &str, uri: &str, body: &str) -> (StatusCode, serde_json::Value) {
        let req = Request::builder()
            .method(method)
            .uri(uri)
            .header("content-type", "application/json")
            .body(Body::from(body.to_string()))
            .unwrap();
        let resp = app.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        let json = if bytes.is_empty() {
            serde_json::Value::Null
        } else {
            serde_json::from_slice(&bytes).unwrap()
        };
        (status, json)
    }

    fn app() -> (AppState, Router) {
        let state = AppState::new(&ServeConfig::default());
        (state.clone(), router(state))
    }

    #[tokio::test]
    async fn mutate_twice_restores_the_seed() {
        let (_, app) = app();
        let (st, created) = call(&app, "POST", "/session", r#"{"family":"rank2","a":1}"#).await;
        assert_eq!(st, StatusCode::CREATED);
        let id = created["id"].as_str().unwrap().to_string();
        let (_, initial) = call(&app, "GET", &format!("/session/{id}"), "").await;
        let (st, once) = call(&app, "POST", &format!("/session/{id}/mutate"), r#"{"k":1}"#).await;
        assert_eq!(st, StatusCode::OK);
        assert_eq!(once["new_variable"], "x1^-1 + x1^-1*x2");
        assert_eq!(once["history"], 1);
        let (_, twice) = call(&app, "POST", &format!("/session/{id}/mutate"), r#"{"k":1}"#).await;
        assert_eq!(twice["seed"], initial["seed"]);
        let (_, undone) = call(&app, "POST", &format!("/session/{id}/undo"), "").await;
        assert_eq!(undone["seed"], once["seed"]);
    }

    #[tokio::test]
    async fn error_statuses() {
        let (_, app) = app();
        let (_, created) = call(&app, "POST", "/session", r#"{"family":"unitriangular","n":3}"#).await;
        let id = created["id"].as_str().unwrap().to_string();
        let (st, body) = call(&app, "POST", &format!("/session/{id}/mutate"), r#"{"k":4}"#).await;
        assert_eq!(st, StatusCode::CONFLICT);
        assert!(body["error"].as_str().unwrap().contains("frozen"));
        let (st, _) = call(&app, "POST", &format!("/session/{id}/mutate"), r#"{"k":7}"#).await;
        assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
        let (st, _) = call(&app, "POST", &format!("/session/{id}/undo"), "").await;
        assert_eq!(st, StatusCode::CONFLICT);
        let (st, _) = call(&app, "GET", "/session/999", "").await;
        assert_eq!(st, StatusCode::NOT_FOUND);
        let (st, _) = call(&app, "POST", "/session", r#"{"n":2,"arrows":[[1,1,1]]}"#).await;
        assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
        let (st, _) = call(&app, "POST", "/session", "not json").await;
        assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
        let (st, _) = call(&app, "DELETE", &format!("/session/{id}"), "").await;
        assert_eq!(st, StatusCode::NO_CONTENT);
        let (st, _) = call(&app, "GET", &format!("/session/{id}"), "").await;
        assert_eq!(st, StatusCode::NOT_FOUND);
    }

    #[tokio::test]
    async fn seed_json_sessions_and_expiry() {
        let state = AppState::new(&ServeConfig {
            idle_timeout: Duration::from_millis(50),
            ..ServeConfig::default()
        });
        let app = router(state.clone());
        let (st, created) = call(&app, "POST", "/session", r#"{"n":2,"arrows":[[1,2,2]]}"#).await;
        assert_eq!(st, StatusCode::CREATED);
        let id = created["id"].as_str().unwrap().to_string();
        let (_, v) = call(&app, "GET", &format!("/session/{id}"), "").await;
        assert_eq!(v["variables"], serde_json::json!(["x1", "x2"]));
        assert_eq!(v["frozen"], serde_json::json!([false, false]));
        tokio::time::sleep(Duration::from_millis(80)).await;
        assert_eq!(state.expire_idle().await, 1);
        let (st, _) = call(&app, "GET", &format!("/session/{id}"), "").await;
        assert_eq!(st, StatusCode::NOT_FOUND);
    }
}
