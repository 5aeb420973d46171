//! The CLI and the HTTP API agree, and HTTP bodies are reproducible.

use crate::{corpus_dir, corpus_source, ensure, Outcome};
use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use http_body_util::BodyExt;
use mg_core::construction::parse;
use mg_service::commands::strip_timings;
use mg_service::http::{router, AppState};
use mg_service::{corpus, Settings};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::process::Command;
use std::sync::Arc;
use tower::ServiceExt;

async fn call(state: &Arc<AppState>, method: Method, uri: &str, body: Value) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = router(state.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn fresh() -> Arc<AppState> {
    Arc::new(AppState::new(Settings::default()))
}

async fn create(state: &Arc<AppState>, source: &str) -> String {
    let (status, v) = call(state, Method::POST, "/constructions", json!({ "source": source })).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_string()
}

/// Verdict of every corpus statement through HTTP, keyed like the corpus report.
async fn http_verdicts() -> BTreeMap<(String, String), String> {
    let st = fresh();
    let mut out = BTreeMap::new();
    for path in corpus::files(&corpus_dir()).unwrap() {
        let file = path.file_stem().unwrap().to_string_lossy().into_owned();
        let source = std::fs::read_to_string(&path).unwrap();
        let id = create(&st, &source).await;
        for s in parse(&source).unwrap().statements {
            let (_, v) = call(&st, Method::POST, &format!("/constructions/{id}/prove"), json!({ "statement": s.label })).await;
            out.insert((file.clone(), format!("statement {}", s.label)), v["verdict"].as_str().unwrap_or("error").to_string());
        }
    }
    out
}

fn cli(args: &[&str]) -> Value {
    let o = Command::new(env!("CARGO_BIN_EXE_mg")).args(args).env_remove("MG_TIMEOUT_MS").output().unwrap();
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

/// Requests covering every reasoning command, as (file, command, body, CLI arguments).
fn requests() -> Vec<(&'static str, &'static str, Value, Vec<&'static str>)> {
    vec![
        ("clough", "prove", json!({ "statement": "main" }), vec!["prove", "--statement", "main"]),
        ("square_center", "discover", json!({ "target": "O" }), vec!["discover", "--target", "O"]),
        ("midsegment", "discover_all", json!({ "kind": "parallel" }), vec!["discover-all", "--kind", "parallel"]),
        ("icmi", "relate", json!({ "expr1": "length(A, X)", "expr2": "length(A, C)" }), vec!["relate", "--expr1", "length(A, X)", "--expr2", "length(A, C)"]),
        ("perimeter_circumradius", "compare", json!({ "expr1": "perimeter", "expr2": "circumradius(A, B, C)" }), vec!["compare", "--expr1", "perimeter", "--expr2", "circumradius(A, B, C)"]),
        ("geometric_mean", "locus", json!({ "statement": "mean", "tracer": "C" }), vec!["locus", "--statement", "mean", "--tracer", "C"]),
        ("envelope_parabola", "envelope", json!({ "curve": "l", "moving": "P" }), vec!["envelope", "--curve", "l", "--moving", "P"]),
        ("varignon", "conditions", json!({ "statement": "diagonals" }), vec!["conditions", "--statement", "diagonals"]),
    ]
}

pub fn criterion() -> Outcome {
    let cli_report = cli(&["corpus", corpus_dir().to_str().unwrap(), "--json"]);
    let cli_verdicts: BTreeMap<(String, String), String> = cli_report["checks"]
        .as_array()
        .ok_or("the CLI report has no checks")?
        .iter()
        .filter(|c| c["item"].as_str().is_some_and(|i| i.starts_with("statement ")))
        .map(|c| ((c["file"].as_str().unwrap().to_string(), c["item"].as_str().unwrap().to_string()), c["actual"].as_str().unwrap().to_string()))
        .collect();

    let runtime = tokio::runtime::Runtime::new().unwrap();
    let http = runtime.block_on(http_verdicts());
    ensure(!http.is_empty() && cli_verdicts == http, || {
        let diff: Vec<_> = http.iter().filter(|(k, v)| cli_verdicts.get(*k) != Some(*v)).collect();
        format!("verdicts differ: {diff:?}")
    })?;

    let reqs = requests();
    for (file, command, body, args) in &reqs {
        let source = corpus_source(file);
        let mut wire = Vec::new();
        for _ in 0..2 {
            let st = fresh();
            let (status, mut v) = runtime.block_on(async {
                let id = create(&st, &source).await;
                call(&st, Method::POST, &format!("/constructions/{id}/{command}"), body.clone()).await
            });
            ensure(status == StatusCode::OK, || format!("{file} {command}: status {status}: {v}"))?;
            strip_timings(&mut v);
            wire.push(serde_json::to_vec(&v).unwrap());
        }
        ensure(wire[0] == wire[1], || format!("{file} {command}: bodies differ between runs"))?;

        let path = corpus_dir().join(format!("{file}.geo"));
        let mut full = args.clone();
        full.insert(1, path.to_str().unwrap());
        let mut from_cli = cli(&full);
        strip_timings(&mut from_cli);
        let mut from_http: Value = serde_json::from_slice(&wire[0]).unwrap();
        from_http.as_object_mut().unwrap().remove("request");
        ensure(serde_json::to_vec(&from_cli).unwrap() == serde_json::to_vec(&from_http).unwrap(), || format!("{file} {command}: CLI and HTTP bodies differ"))?;
    }
    Ok(format!("{} corpus verdicts identical via CLI and HTTP; {} commands byte-identical across runs and front ends modulo timing", http.len(), reqs.len()))
}
