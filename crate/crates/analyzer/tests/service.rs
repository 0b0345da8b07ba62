use std::path::PathBuf;
use std::process::Command;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use sla4oai_analyzer::service::{router, ServiceConfig};
use tower::ServiceExt;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

async fn send(config: ServiceConfig, request: Request<Body>) -> (StatusCode, Value) {
    let response = router(config).oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn post(body: impl Into<Body>) -> (StatusCode, Value) {
    let request = Request::post("/operations/validity").header("content-type", "application/json").body(body.into()).unwrap();
    send(ServiceConfig::default(), request).await
}

async fn post_json(body: Value) -> (StatusCode, Value) {
    post(body.to_string()).await
}

#[tokio::test]
async fn health() {
    let (status, body) = send(ServiceConfig::default(), Request::get("/health").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
}

#[tokio::test]
async fn fullcontact_inline_is_valid() {
    let (status, body) =
        post_json(json!({ "document": fixture("fullcontact.yaml"), "oas": fixture("fullcontact-oas.yaml") })).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["verdict"], "valid");
    assert_eq!(body["warnings"], json!([]));
}

#[tokio::test]
async fn unresolvable_api_reference_only_warns() {
    let (status, body) = post_json(json!({ "document": fixture("fullcontact.yaml") })).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["verdict"], "valid");
    assert_eq!(body["warnings"][0]["code"], "OAS_UNAVAILABLE");
    assert_eq!(body["warnings"][0]["severity"], "warning");
}

#[tokio::test]
async fn quota_pair_conflict() {
    let (status, body) = post_json(json!({
        "document": fixture("cases/vc2_2_invalid.yaml"),
        "oas": fixture("cases/oas.yaml"),
        "capacity": fixture("cases/vc2_2_invalid.capacity.yaml"),
    }))
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["verdict"], "invalid");
    let criteria: Vec<&Value> = body["conflicts"].as_array().unwrap().iter().map(|c| &c["criterion"]).collect();
    assert_eq!(criteria, [&json!("VC2_2")]);
}

#[tokio::test]
async fn bad_requests_are_400() {
    assert_eq!(post("").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post("{not json").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post_json(json!({})).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post_json(json!({ "document": "a: 1", "url": "http://x" })).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post_json(json!({ "document": "a: 1", "extra": true })).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post_json(json!({ "url": "/etc/passwd" })).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn syntax_errors_carry_diagnostics() {
    let (status, body) = post_json(json!({ "document": "context: [1" })).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["verdict"], "syntax_error");
    assert_eq!(body["diagnostics"][0]["severity"], "error");

    let (status, body) = post_json(json!({
        "document": fixture("cases/vc2_2_valid.yaml"),
        "capacity": "/a: {get: {requests: {threshold: 0}}}",
    }))
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["diagnostics"][0]["code"], "INVALID_CAPACITY");
}

#[tokio::test]
async fn fetch_denied_offline_is_422() {
    let (status, body) = post_json(json!({ "url": "http://127.0.0.1:9/sla.yaml" })).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["error"].as_str().unwrap().contains("disabled"), "{body}");

    let oas = "openapi: 3.0.0\npaths: {}\nx-sla: 'http://127.0.0.1:9/sla.yaml'\n";
    let (status, body) = post_json(json!({ "document": oas })).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["diagnostics"][0]["code"], "SLA_UNAVAILABLE");
}

#[tokio::test]
async fn local_references_are_never_read() {
    let oas = "openapi: 3.0.0\npaths: {}\nx-sla: /etc/hostname\n";
    let config = ServiceConfig { allow_fetch: true };
    let request = Request::post("/operations/validity").body(Body::from(json!({ "document": oas }).to_string())).unwrap();
    let (status, body) = send(config, request).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["diagnostics"][0]["message"].as_str().unwrap().contains("only resolves http(s)"), "{body}");
}

#[tokio::test]
async fn concurrent_requests_are_independent() {
    let valid = json!({ "document": fixture("cases/vc2_3_valid.yaml"), "oas": fixture("cases/oas.yaml") });
    let invalid = json!({ "document": fixture("cases/vc2_3_invalid.yaml"), "oas": fixture("cases/oas.yaml") });
    let runs: Vec<_> = (0..8).map(|i| post_json(if i % 2 == 0 { valid.clone() } else { invalid.clone() })).collect();
    let results = futures_join(runs).await;
    for (i, (status, body)) in results.into_iter().enumerate() {
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["verdict"], if i % 2 == 0 { "valid" } else { "invalid" });
    }
}

async fn futures_join<F: std::future::Future<Output = (StatusCode, Value)> + Send + 'static>(fs: Vec<F>) -> Vec<(StatusCode, Value)> {
    let handles: Vec<_> = fs.into_iter().map(tokio::spawn).collect();
    let mut out = Vec::new();
    for h in handles {
        out.push(h.await.unwrap());
    }
    out
}

#[tokio::test]
async fn cli_and_service_agree() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/cases");
    let output = Command::new(env!("CARGO_BIN_EXE_sla4oai-analyzer"))
        .args(["-o", "validity", "--format", "json", "-f"])
        .arg(dir.join("vc4_2_invalid.yaml"))
        .output()
        .unwrap();
    let from_cli: Value = serde_json::from_slice(&output.stdout).unwrap();
    let (_, from_service) =
        post_json(json!({ "document": fixture("cases/vc4_2_invalid.yaml"), "oas": fixture("cases/oas.yaml") })).await;
    assert_eq!(from_cli, from_service);
}
