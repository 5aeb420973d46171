//! The HTTP API. Reasoning requests that take longer than
//! [`AppState::sync_wait`] answer 202 with a poll URL under `/jobs/{id}`.

use crate::commands::{self, construction_json, parse_pins, Request};
use crate::registry::token;
use crate::{Registry, ServiceError, Settings};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

pub const COMPUTATION_ID: &str = "x-computation-id";

enum Job {
    Pending(Value),
    Done(u16, Value),
}

pub struct AppState {
    pub registry: Registry,
    jobs: Mutex<HashMap<String, Job>>,
    pub settings: Settings,
    /// How long a request waits for its result before answering 202.
    pub sync_wait: Duration,
    counter: AtomicU64,
}

impl AppState {
    pub fn new(settings: Settings) -> AppState {
        AppState::with_sync_wait(settings, Duration::from_secs(2))
    }

    pub fn with_sync_wait(settings: Settings, sync_wait: Duration) -> AppState {
        AppState { registry: Registry::default(), jobs: Mutex::new(HashMap::new()), settings, sync_wait, counter: AtomicU64::new(1) }
    }
}

type Shared = Arc<AppState>;

fn reply(state: &AppState, status: u16, body: Value) -> Response {
    let id = state.counter.fetch_add(1, Ordering::Relaxed);
    let mut r = (StatusCode::from_u16(status).expect("valid status"), axum::Json(body)).into_response();
    r.headers_mut().insert(COMPUTATION_ID, HeaderValue::from(id));
    r
}

fn failure(state: &AppState, e: &ServiceError, echo: Value) -> Response {
    let mut body = e.to_json();
    body["request"] = echo;
    reply(state, e.http_status(), body)
}

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/constructions", post(create))
        .route("/constructions/{id}", get(show).put(edit).delete(remove))
        .route("/constructions/{id}/instance", get(instance))
        .route("/constructions/{id}/{command}", post(command))
        .route("/jobs/{id}", get(job))
        .with_state(state)
}

/// Construction source from a JSON `{"source": ...}` body or plain text.
fn source(headers: &HeaderMap, body: &Bytes) -> Result<String, ServiceError> {
    let text = std::str::from_utf8(body).map_err(|_| ServiceError::BadRequest("body is not UTF-8".into()))?;
    let json = headers.get(header::CONTENT_TYPE).and_then(|v| v.to_str().ok()).is_some_and(|v| v.starts_with("application/json"));
    if !json {
        return Ok(text.to_string());
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Source {
        source: String,
    }
    serde_json::from_str::<Source>(text).map(|s| s.source).map_err(|e| ServiceError::BadRequest(e.to_string()))
}

async fn create(State(st): State<Shared>, headers: HeaderMap, body: Bytes) -> Response {
    let src = match source(&headers, &body) {
        Ok(s) => s,
        Err(e) => return failure(&st, &e, Value::Null),
    };
    let echo = json!({ "source": src });
    match st.registry.insert(src) {
        Ok((id, s)) => {
            let mut v = construction_json(&s.construction);
            v["status"] = json!("ok");
            v["id"] = json!(id);
            v["request"] = echo;
            reply(&st, 201, v)
        }
        Err(e) => failure(&st, &e, echo),
    }
}

async fn show(State(st): State<Shared>, Path(id): Path<String>) -> Response {
    let echo = json!({ "id": id });
    match st.registry.get(&id) {
        Ok(s) => {
            let m = s.model();
            let mut v = construction_json(&s.construction);
            v["algebra"] = json!({
                "free_variables": m.free_vars.iter().map(|x| m.var_name(*x)).collect::<Vec<_>>(),
                "dependent_variables": m.dep_vars.iter().map(|x| m.var_name(*x)).collect::<Vec<_>>(),
                "hypotheses": m.hypotheses.iter().map(|h| m.format(h)).collect::<Vec<_>>(),
                "nondegeneracy": m.nondegeneracy.iter().map(|h| m.format(h)).collect::<Vec<_>>(),
                "wlog": m.wlog_applied,
            });
            v["source"] = json!(s.source);
            v["status"] = json!("ok");
            v["request"] = echo;
            reply(&st, 200, v)
        }
        Err(e) => failure(&st, &e, echo),
    }
}

async fn edit(State(st): State<Shared>, Path(id): Path<String>, headers: HeaderMap, body: Bytes) -> Response {
    let src = match source(&headers, &body) {
        Ok(s) => s,
        Err(e) => return failure(&st, &e, json!({ "id": id })),
    };
    let echo = json!({ "id": id, "source": src });
    match st.registry.replace(&id, src) {
        Ok(s) => {
            let mut v = construction_json(&s.construction);
            v["status"] = json!("ok");
            v["id"] = json!(id);
            v["request"] = echo;
            reply(&st, 200, v)
        }
        Err(e) => failure(&st, &e, echo),
    }
}

async fn remove(State(st): State<Shared>, Path(id): Path<String>) -> Response {
    let echo = json!({ "id": id });
    match st.registry.remove(&id) {
        Ok(()) => reply(&st, 200, json!({ "status": "ok", "deleted": id, "request": echo })),
        Err(e) => failure(&st, &e, echo),
    }
}

#[derive(Deserialize)]
struct InstanceQuery {
    seed: Option<u64>,
    pins: Option<String>,
}

async fn instance(State(st): State<Shared>, Path(id): Path<String>, Query(q): Query<InstanceQuery>) -> Response {
    let seed = q.seed.unwrap_or(st.settings.seed);
    let echo = json!({ "id": id, "seed": seed, "pins": q.pins });
    let run = || -> Result<Value, ServiceError> {
        let s = st.registry.get(&id)?;
        let pins = parse_pins(q.pins.as_deref().unwrap_or(""))?;
        let v = commands::instance(&s.construction, seed, &pins)?;
        *s.last_instance.lock().expect("instance lock") = Some(v.clone());
        Ok(v)
    };
    match run() {
        Ok(mut v) => {
            v["status"] = json!("ok");
            v["request"] = echo;
            reply(&st, 200, v)
        }
        Err(e) => failure(&st, &e, echo),
    }
}

/// Splits a request body into per-request settings and the command.
fn request(command: &str, body: &Bytes, base: &Settings) -> Result<(Request, Settings, Value), ServiceError> {
    let command = command.replace('-', "_");
    if !Request::NAMES.contains(&command.as_str()) {
        return Err(ServiceError::UnknownCommand(command));
    }
    let echo: Value = if body.is_empty() {
        json!({})
    } else {
        serde_json::from_slice(body).map_err(|e| ServiceError::BadRequest(e.to_string()))?
    };
    let Value::Object(mut fields) = echo.clone() else {
        return Err(ServiceError::BadRequest("body must be a JSON object".into()));
    };
    let mut settings = base.clone();
    let bad = |what: &str| ServiceError::BadRequest(format!("`{what}` has the wrong type"));
    if let Some(v) = fields.remove("seed") {
        settings.seed = v.as_u64().ok_or_else(|| bad("seed"))?;
    }
    if let Some(v) = fields.remove("timeout_ms") {
        settings.timeout_ms = v.as_u64().ok_or_else(|| bad("timeout_ms"))?;
    }
    if let Some(v) = fields.remove("wlog") {
        settings.wlog = v.as_bool().ok_or_else(|| bad("wlog"))?;
    }
    fields.insert("command".into(), json!(command));
    let req: Request = serde_json::from_value(Value::Object(fields)).map_err(|e| ServiceError::BadRequest(e.to_string()))?;
    Ok((req, settings, echo))
}

fn outcome_reply(result: Result<commands::Outcome, ServiceError>, echo: Value) -> (u16, Value) {
    match result {
        Ok(o) => {
            let mut body = o.body;
            body["request"] = echo;
            (if o.unknown { 503 } else { 200 }, body)
        }
        Err(e) => {
            let mut body = e.to_json();
            body["request"] = echo;
            (e.http_status(), body)
        }
    }
}

async fn command(State(st): State<Shared>, Path((id, command)): Path<(String, String)>, body: Bytes) -> Response {
    let (req, settings, echo) = match request(&command, &body, &st.settings) {
        Ok(r) => r,
        Err(e) => {
            let echo = serde_json::from_slice(&body).unwrap_or(Value::Null);
            return failure(&st, &e, echo);
        }
    };
    let session = match st.registry.get(&id) {
        Ok(s) => s,
        Err(e) => return failure(&st, &e, echo),
    };
    let c = session.construction.clone();
    let mut handle = tokio::task::spawn_blocking(move || commands::execute(&c, &req, &settings));
    match tokio::time::timeout(st.sync_wait, &mut handle).await {
        Ok(joined) => {
            let (status, body) = outcome_reply(joined.expect("reasoning task panicked"), echo);
            reply(&st, status, body)
        }
        Err(_) => {
            let job = token();
            let pending = json!({ "status": "pending", "job": job, "poll": format!("/jobs/{job}"), "request": echo.clone() });
            st.jobs.lock().expect("job lock").insert(job.clone(), Job::Pending(pending.clone()));
            let state = st.clone();
            tokio::spawn(async move {
                let (status, body) = outcome_reply(handle.await.expect("reasoning task panicked"), echo);
                state.jobs.lock().expect("job lock").insert(job, Job::Done(status, body));
            });
            reply(&st, 202, pending)
        }
    }
}

async fn job(State(st): State<Shared>, Path(id): Path<String>) -> Response {
    let found = match st.jobs.lock().expect("job lock").get(&id) {
        Some(Job::Pending(v)) => Some((202, v.clone())),
        Some(Job::Done(status, v)) => Some((*status, v.clone())),
        None => None,
    };
    match found {
        Some((status, body)) => reply(&st, status, body),
        None => failure(&st, &ServiceError::UnknownJob(id.clone()), json!({ "job": id })),
    }
}

/// Serves the API until the process ends.
pub async fn serve(addr: std::net::SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state))).await
}
