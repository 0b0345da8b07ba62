//! Linking an SLA document to its OpenAPI document.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

use crate::model::{ApiOperation, HttpMethod};

use super::diagnostic::{Code, Diagnostic};
use super::document::{decode, Format, Sla4oaiDocument};
use super::glob::{normalize_path, GlobPattern};
use super::value::{Node, Pointer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("fetching `{0}` is disabled; pass --allow-fetch to enable network access")]
    FetchDenied(String),
    #[error("cannot resolve relative reference `{0}` without a base location")]
    NoBase(String),
    #[error("cannot read `{reference}`: {message}")]
    Io { reference: String, message: String },
    #[error("fetching `{reference}` failed: {message}")]
    Http { reference: String, message: String },
}

/// Resolves references (relative paths or URLs) to bytes. Implementations
/// must be usable from several threads at once.
pub trait ResourceLoader: Send + Sync {
    fn load(&self, reference: &str) -> Result<Vec<u8>, LoadError>;
}

/// Reads files relative to a base directory and, only when allowed, fetches
/// http(s) URLs.
#[derive(Debug, Clone, Default)]
pub struct StandardLoader {
    base_dir: Option<PathBuf>,
    allow_fetch: bool,
}

impl StandardLoader {
    pub fn offline(base_dir: Option<PathBuf>) -> Self {
        StandardLoader { base_dir, allow_fetch: false }
    }

    pub fn new(base_dir: Option<PathBuf>, allow_fetch: bool) -> Self {
        StandardLoader { base_dir, allow_fetch }
    }

    /// A loader resolving relative references against the directory of `file`.
    pub fn beside(file: &Path, allow_fetch: bool) -> Self {
        let dir = file.parent().map(|p| if p.as_os_str().is_empty() { PathBuf::from(".") } else { p.to_path_buf() });
        StandardLoader { base_dir: dir, allow_fetch }
    }

    pub fn allows_fetch(&self) -> bool {
        self.allow_fetch
    }
}

pub fn is_remote(reference: &str) -> bool {
    matches!(url::Url::parse(reference), Ok(u) if u.scheme() == "http" || u.scheme() == "https")
}

impl ResourceLoader for StandardLoader {
    fn load(&self, reference: &str) -> Result<Vec<u8>, LoadError> {
        if is_remote(reference) {
            if !self.allow_fetch {
                return Err(LoadError::FetchDenied(reference.to_string()));
            }
            return fetch(reference);
        }
        let path = match url::Url::parse(reference) {
            Ok(u) if u.scheme() == "file" => u.to_file_path().map_err(|_| LoadError::Io {
                reference: reference.to_string(),
                message: "not a local file URL".to_string(),
            })?,
            _ => {
                let p = PathBuf::from(reference);
                if p.is_absolute() {
                    p
                } else {
                    match &self.base_dir {
                        Some(base) => base.join(p),
                        None => return Err(LoadError::NoBase(reference.to_string())),
                    }
                }
            }
        };
        std::fs::read(&path).map_err(|e| LoadError::Io { reference: path.display().to_string(), message: e.to_string() })
    }
}

fn fetch(reference: &str) -> Result<Vec<u8>, LoadError> {
    let http = |message: String| LoadError::Http { reference: reference.to_string(), message };
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(20))
        .build()
        .map_err(|e| http(e.to_string()))?;
    let response = client.get(reference).send().map_err(|e| http(e.to_string()))?;
    if !response.status().is_success() {
        return Err(http(format!("HTTP status {}", response.status())));
    }
    response.bytes().map(|b| b.to_vec()).map_err(|e| http(e.to_string()))
}

/// Fixed reference → bytes table; never touches the file system or network.
#[derive(Debug, Clone, Default)]
pub struct InMemoryLoader {
    resources: HashMap<String, Vec<u8>>,
}

impl InMemoryLoader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, reference: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        self.resources.insert(reference.into(), bytes.into());
        self
    }
}

impl ResourceLoader for InMemoryLoader {
    fn load(&self, reference: &str) -> Result<Vec<u8>, LoadError> {
        self.resources
            .get(reference)
            .cloned()
            .ok_or_else(|| LoadError::Io { reference: reference.to_string(), message: "not found".to_string() })
    }
}

/// Operations available for glob resolution. When `linked` is false the
/// set was built from literal SLA entries only (no OpenAPI document).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperationSet {
    pub operations: BTreeSet<ApiOperation>,
    pub linked: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Linked {
    pub operations: OperationSet,
    pub warnings: Vec<Diagnostic>,
}

/// The `x-sla` reference of an OpenAPI document, if `node` is one.
pub fn sla_reference(node: &Node) -> Option<String> {
    let map = node.as_map()?;
    if !map.contains_key("openapi") && !map.contains_key("swagger") {
        return None;
    }
    match map.get("x-sla") {
        Some(Node::String(s)) => Some(s.clone()),
        _ => None,
    }
}

/// Reads the (path, method) pairs of an OpenAPI document. Only `paths` is consumed.
pub fn parse_oas(source: &[u8]) -> Result<(BTreeSet<ApiOperation>, Vec<Diagnostic>), Vec<Diagnostic>> {
    let node = decode(source, Format::Auto)?;
    let root = Pointer::root();
    let Some(map) = node.as_map() else {
        return Err(vec![Diagnostic::error(Code::InvalidOas, &root, "OpenAPI document root must be a mapping")]);
    };
    let mut ops = BTreeSet::new();
    let mut warnings = Vec::new();
    match map.get("paths") {
        None | Some(Node::Null) => {}
        Some(Node::Map(paths)) => {
            for (path, item) in paths {
                let Some(item) = item.as_map() else {
                    return Err(vec![Diagnostic::error(
                        Code::InvalidOas,
                        &root.join("paths").join(path),
                        "path item must be a mapping",
                    )]);
                };
                for key in item.keys() {
                    if let Ok(method) = key.parse::<HttpMethod>() {
                        if !method.is_all() {
                            let op = ApiOperation::new(normalize_path(path), method)
                                .expect("normalized paths start with '/'");
                            ops.insert(op);
                        }
                    }
                }
            }
        }
        Some(other) => {
            return Err(vec![Diagnostic::error(
                Code::InvalidOas,
                &root.join("paths"),
                format!("`paths` must be a mapping, found {}", other.kind()),
            )])
        }
    }
    if ops.is_empty() {
        warnings.push(Diagnostic::warning(Code::EmptyOasPaths, &root.join("paths"), "OpenAPI document declares no operations"));
    }
    Ok((ops, warnings))
}

/// Loads the OpenAPI document (given bytes, else `context.api` via `loader`)
/// and cross-checks SLA paths against it.
pub fn link_oas(
    doc: &Sla4oaiDocument,
    oas_source: Option<&[u8]>,
    loader: &dyn ResourceLoader,
) -> Result<Linked, Vec<Diagnostic>> {
    let api_at = Pointer::root().join("context").join("api");
    let bytes = match oas_source {
        Some(b) => b.to_vec(),
        None => loader.load(&doc.context.api).map_err(|e| {
            vec![Diagnostic::error(Code::OasUnavailable, &api_at, format!("OpenAPI document unavailable: {e}"))]
        })?,
    };
    let (ops, mut warnings) = parse_oas(&bytes).map_err(|ds| {
        ds.into_iter()
            .map(|d| Diagnostic { location: api_at.to_string(), message: format!("in OpenAPI document: {}", d.message), ..d })
            .collect::<Vec<_>>()
    })?;
    for w in &mut warnings {
        w.location = api_at.to_string();
    }

    let oas_paths: BTreeSet<&str> = ops.iter().map(|o| o.path()).collect();
    for (at, _, _, tree) in doc.limit_sections() {
        for (raw, methods) in &tree.entries {
            let pattern = GlobPattern::new(raw);
            let pat = at.join(raw);
            if pattern.is_glob() {
                if !oas_paths.iter().any(|p| pattern.matches(p)) {
                    warnings.push(Diagnostic::warning(
                        Code::NoMatch,
                        &pat,
                        format!("pattern `{raw}` matches no OpenAPI path"),
                    ));
                }
                continue;
            }
            if !oas_paths.contains(pattern.normalized()) {
                warnings.push(Diagnostic::warning(
                    Code::UnknownPath,
                    &pat,
                    format!("path `{}` is not declared in the OpenAPI document", pattern.normalized()),
                ));
                continue;
            }
            for method in methods.keys().filter(|m| !m.is_all()) {
                let op = ApiOperation::new(pattern.normalized(), *method).expect("normalized");
                if !ops.contains(&op) {
                    warnings.push(Diagnostic::warning(
                        Code::UnknownMethod,
                        &pat.join(method),
                        format!("operation {op} is not declared in the OpenAPI document"),
                    ));
                }
            }
        }
    }
    Ok(Linked { operations: OperationSet { operations: ops, linked: true }, warnings })
}

/// Fallback when no OpenAPI document is available: the literal SLA entries
/// become the operations, `all` kept as-is.
pub fn unlinked_operations(doc: &Sla4oaiDocument) -> OperationSet {
    let mut operations = BTreeSet::new();
    for (_, _, _, tree) in doc.limit_sections() {
        for (raw, methods) in &tree.entries {
            let pattern = GlobPattern::new(raw);
            if pattern.is_glob() {
                continue;
            }
            for method in methods.keys() {
                operations.insert(ApiOperation::new(pattern.normalized(), *method).expect("normalized"));
            }
        }
    }
    OperationSet { operations, linked: false }
}
