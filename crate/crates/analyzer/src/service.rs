//! HTTP API: `POST /operations/validity` and `GET /health`.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use sla4oai_core::analysis::PriorityPolicy;
use sla4oai_core::pipeline::{analyze, AnalysisInput, Outcome};
use sla4oai_core::sla4oai::{is_remote, Format, LoadError, ResourceLoader, StandardLoader};

use crate::render::diagnostics_json;

#[derive(Debug, Clone, Copy, Default)]
pub struct ServiceConfig {
    pub allow_fetch: bool,
}

/// Request body. Exactly one of `document` (inline YAML or JSON) and `url`
/// must be given.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidityRequest {
    pub document: Option<String>,
    pub url: Option<String>,
    /// Capacity sidecar YAML.
    pub capacity: Option<String>,
    /// Inline OpenAPI document.
    pub oas: Option<String>,
}

/// Loads only http(s) references; the service never reads its own disk.
struct RemoteOnlyLoader(StandardLoader);

impl ResourceLoader for RemoteOnlyLoader {
    fn load(&self, reference: &str) -> Result<Vec<u8>, LoadError> {
        if is_remote(reference) {
            self.0.load(reference)
        } else {
            Err(LoadError::Io { reference: reference.to_string(), message: "the service only resolves http(s) URLs".into() })
        }
    }
}

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    json(status, serde_json::json!({ "error": message.into() }).to_string())
}

/// Runs one request to completion. Blocking: loads may hit the network.
pub fn handle(request: ValidityRequest, config: ServiceConfig) -> Response {
    let loader = RemoteOnlyLoader(StandardLoader::new(None, config.allow_fetch));
    let source = match (request.document, request.url) {
        (Some(doc), None) => doc.into_bytes(),
        (None, Some(url)) => {
            if !is_remote(&url) {
                return error(StatusCode::BAD_REQUEST, format!("`url` must be an http(s) URL, got `{url}`"));
            }
            match loader.load(&url) {
                Ok(bytes) => bytes,
                Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
            }
        }
        (Some(_), Some(_)) => return error(StatusCode::BAD_REQUEST, "give either `document` or `url`, not both"),
        (None, None) => return error(StatusCode::BAD_REQUEST, "one of `document` or `url` is required"),
    };
    let input = AnalysisInput {
        source: &source,
        format: Format::Auto,
        oas: request.oas.as_deref().map(str::as_bytes),
        capacity: request.capacity.as_deref(),
        policy: PriorityPolicy::default(),
    };
    match analyze(&input, &loader) {
        Outcome::Analyzed(report) => json(StatusCode::OK, report.to_json()),
        Outcome::SyntaxErrors(d) => json(StatusCode::BAD_REQUEST, diagnostics_json("syntax_error", &d)),
        Outcome::LinkFailure(d) => json(StatusCode::UNPROCESSABLE_ENTITY, diagnostics_json("link_failure", &d)),
    }
}

async fn validity(State(config): State<ServiceConfig>, body: Bytes) -> Response {
    if body.iter().all(u8::is_ascii_whitespace) {
        return error(StatusCode::BAD_REQUEST, "request body is empty");
    }
    let request: ValidityRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("invalid request body: {e}")),
    };
    match tokio::task::spawn_blocking(move || handle(request, config)).await {
        Ok(response) => response,
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, format!("analysis failed: {e}")),
    }
}

async fn health() -> Response {
    json(StatusCode::OK, r#"{"status":"ok"}"#.to_string())
}

pub fn router(config: ServiceConfig) -> Router {
    Router::new()
        .route("/operations/validity", post(validity))
        .route("/health", get(health))
        .with_state(config)
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(config)).await
}
