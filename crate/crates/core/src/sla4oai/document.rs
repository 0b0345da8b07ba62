//! SLA4OAI document shape and its structural validation.

use indexmap::IndexMap;
use num::{Signed, ToPrimitive};

use crate::model::{
    HttpMethod, LimitCost, Metric, MetricType, OperationCost, OverageCost, Period, Resolution, Threshold,
    ThresholdType, TimeUnit, WindowKind,
};
use crate::rational::{is_integer, parse_decimal, Rational};

use super::diagnostic::{has_errors, Code, Diagnostic};
use super::glob::normalize_path;
use super::value::{parse_json, parse_yaml, Node, Pointer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Yaml,
    Json,
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentType {
    Plans,
    Instance,
}

impl DocumentType {
    pub const fn as_str(self) -> &'static str {
        match self {
            DocumentType::Plans => "plans",
            DocumentType::Instance => "instance",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub id: String,
    pub sla_version: String,
    pub doc_type: DocumentType,
    /// Reference to the OpenAPI document: a relative path or a URL.
    pub api: String,
    pub provider: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infrastructure {
    pub supervisor: String,
    pub monitor: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationshipSpec {
    pub target: String,
    pub factor: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSection {
    pub metric: Metric,
    pub relationships: Vec<RelationshipSpec>,
}

/// Billing block of a plan, or the document-level defaults.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PricingSection {
    pub cost: Option<Rational>,
    pub custom: bool,
    pub currency: Option<String>,
    pub period: Option<Period>,
    pub overage: Option<OverageCost>,
    pub operation: Option<OperationCost>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodSpec {
    Explicit(Period),
    /// No `period` key: the plan's billing period applies.
    Inherit,
    /// `period: null`: the limit has no period at all.
    Absent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLimit {
    pub threshold: Threshold,
    pub threshold_type: ThresholdType,
    pub period: PeriodSpec,
    pub cost: Option<LimitCost>,
}

/// metric name → limits
pub type MetricLimits = IndexMap<String, Vec<RawLimit>>;

/// path pattern (as written) → method → metric → limits
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LimitTree {
    pub entries: IndexMap<String, IndexMap<HttpMethod, MetricLimits>>,
}

impl LimitTree {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlanSection {
    pub pricing: Option<PricingSection>,
    pub quotas: LimitTree,
    pub rates: LimitTree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sla4oaiDocument {
    pub context: Context,
    pub infrastructure: Option<Infrastructure>,
    /// Stored verbatim; analysis ignores it.
    pub availability: Option<String>,
    pub metrics: IndexMap<String, MetricSection>,
    /// Document-level billing defaults.
    pub pricing: Option<PricingSection>,
    /// Top-level `quotas`/`rates`: defaults for every plan, or the terms of an
    /// instance document.
    pub defaults: PlanSection,
    pub plans: IndexMap<String, PlanSection>,
}

impl Sla4oaiDocument {
    /// Every limit section: document defaults first, then each plan in order.
    pub fn limit_sections(&self) -> Vec<(Pointer, Option<&str>, WindowKind, &LimitTree)> {
        let mut out = Vec::new();
        for window in [WindowKind::Quota, WindowKind::Rate] {
            out.push((Pointer::root().join(window.section()), None, window, self.defaults.tree(window)));
        }
        for (name, plan) in &self.plans {
            for window in [WindowKind::Quota, WindowKind::Rate] {
                let at = Pointer::root().join("plans").join(name).join(window.section());
                out.push((at, Some(name.as_str()), window, plan.tree(window)));
            }
        }
        out
    }
}

impl PlanSection {
    pub fn tree(&self, window: WindowKind) -> &LimitTree {
        match window {
            WindowKind::Quota => &self.quotas,
            WindowKind::Rate => &self.rates,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub document: Sla4oaiDocument,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SyntaxVerdict {
    Valid { warnings: Vec<Diagnostic> },
    Invalid(Vec<Diagnostic>),
}

impl SyntaxVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, SyntaxVerdict::Valid { .. })
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            SyntaxVerdict::Valid { warnings } => warnings,
            SyntaxVerdict::Invalid(d) => d,
        }
    }
}

/// Structural check only; no semantic analysis runs.
pub fn syntax_check(source: &[u8]) -> SyntaxVerdict {
    match parse_document(source, Format::Auto) {
        Ok(parsed) => SyntaxVerdict::Valid { warnings: parsed.warnings },
        Err(diagnostics) => SyntaxVerdict::Invalid(diagnostics),
    }
}

/// Decodes and structurally validates an SLA4OAI document. On failure the
/// returned list holds at least one error (warnings may accompany it).
pub fn parse_document(source: &[u8], format: Format) -> Result<Parsed, Vec<Diagnostic>> {
    let node = decode(source, format)?;
    let mut reader = Reader::default();
    let document = reader.document(&node);
    match document {
        Some(document) if !has_errors(&reader.diagnostics) => {
            Ok(Parsed { document, warnings: reader.diagnostics })
        }
        _ => {
            debug_assert!(has_errors(&reader.diagnostics));
            Err(reader.diagnostics)
        }
    }
}

/// Bytes → tree, reporting empty input, bad UTF-8 and syntax errors.
pub fn decode(source: &[u8], format: Format) -> Result<Node, Vec<Diagnostic>> {
    let root = Pointer::root();
    let text = std::str::from_utf8(source).map_err(|e| {
        vec![Diagnostic::error(Code::InvalidUtf8, &root, format!("input is not valid UTF-8: {e}"))]
    })?;
    if text.trim().is_empty() {
        return Err(vec![Diagnostic::error(Code::EmptyInput, &root, "input is empty")]);
    }
    let json = match format {
        Format::Json => true,
        Format::Yaml => false,
        Format::Auto => text.trim_start().starts_with(['{', '[']),
    };
    let parsed = if json { parse_json(text) } else { parse_yaml(text) };
    parsed.map_err(|f| {
        let kind = if json { "JSON" } else { "YAML" };
        vec![Diagnostic::error(
            Code::ParseError,
            &root,
            format!("malformed {kind} at line {}, column {}: {}", f.line, f.column, f.message),
        )]
    })
}

const TOP_LEVEL_KEYS: &[&str] =
    &["context", "infrastructure", "availability", "metrics", "pricing", "plans", "quotas", "rates", "configuration"];

#[derive(Default)]
struct Reader {
    diagnostics: Vec<Diagnostic>,
}

impl Reader {
    fn error(&mut self, code: Code, at: &Pointer, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::error(code, at, message));
    }

    fn warn(&mut self, code: Code, at: &Pointer, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::warning(code, at, message));
    }

    fn map<'a>(&mut self, node: &'a Node, at: &Pointer, what: &str) -> Option<&'a IndexMap<String, Node>> {
        match node {
            Node::Map(m) => Some(m),
            other => {
                self.error(Code::InvalidType, at, format!("{what} must be a mapping, found {}", other.kind()));
                None
            }
        }
    }

    fn unknown_keys(&mut self, map: &IndexMap<String, Node>, allowed: &[&str], at: &Pointer) {
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) && !key.starts_with("x-") {
                self.warn(Code::UnknownKey, &at.join(key), format!("unknown key `{key}` is ignored"));
            }
        }
    }

    fn string(&mut self, map: &IndexMap<String, Node>, key: &str, at: &Pointer, required: bool) -> Option<String> {
        match map.get(key) {
            Some(Node::String(s)) => Some(s.clone()),
            Some(Node::Number(n)) => Some(n.clone()),
            None | Some(Node::Null) => {
                if required {
                    self.error(Code::MissingField, &at.join(key), format!("`{key}` is required"));
                }
                None
            }
            Some(other) => {
                self.error(Code::InvalidType, &at.join(key), format!("`{key}` must be a string, found {}", other.kind()));
                None
            }
        }
    }

    fn number(&mut self, node: &Node, at: &Pointer, what: &str) -> Option<Rational> {
        let parsed = match node {
            Node::Number(n) => parse_decimal(n),
            Node::String(s) => parse_decimal(s),
            _ => None,
        };
        if parsed.is_none() {
            self.error(Code::InvalidType, at, format!("{what} must be a number, found {}", node.kind()));
        }
        parsed
    }

    fn non_negative(&mut self, node: &Node, at: &Pointer, what: &str) -> Option<Rational> {
        let v = self.number(node, at, what)?;
        if v.is_negative() {
            self.error(Code::InvalidAmount, at, format!("{what} must be non-negative"));
            return None;
        }
        Some(v)
    }

    fn positive_int(&mut self, node: &Node, at: &Pointer, what: &str, code: Code) -> Option<u64> {
        let v = self.number(node, at, what)?;
        if !is_integer(&v) {
            self.error(Code::InvalidType, at, format!("{what} must be an integer"));
            return None;
        }
        if !v.is_positive() {
            self.error(code, at, format!("{what} must be a positive integer"));
            return None;
        }
        match v.to_integer().to_u64() {
            Some(n) => Some(n),
            None => {
                self.error(Code::InvalidType, at, format!("{what} is too large"));
                None
            }
        }
    }

    fn boolean(&mut self, map: &IndexMap<String, Node>, key: &str, at: &Pointer) -> bool {
        match map.get(key) {
            None | Some(Node::Null) => false,
            Some(Node::Bool(b)) => *b,
            Some(other) => {
                self.error(Code::InvalidType, &at.join(key), format!("`{key}` must be a boolean, found {}", other.kind()));
                false
            }
        }
    }

    fn document(&mut self, node: &Node) -> Option<Sla4oaiDocument> {
        let root = Pointer::root();
        let Node::Map(top) = node else {
            self.error(Code::InvalidRoot, &root, format!("document root must be a mapping, found {}", node.kind()));
            return None;
        };
        self.unknown_keys(top, TOP_LEVEL_KEYS, &root);

        let context = match top.get("context") {
            None | Some(Node::Null) => {
                self.error(Code::MissingContext, &root.join("context"), "`context` is required");
                None
            }
            Some(n) => self.context(n, &root.join("context")),
        };
        let infrastructure = top.get("infrastructure").and_then(|n| self.infrastructure(n, &root.join("infrastructure")));
        let availability = match top.get("availability") {
            None | Some(Node::Null) => None,
            Some(Node::String(s)) => Some(s.clone()),
            Some(other) => {
                self.error(
                    Code::InvalidType,
                    &root.join("availability"),
                    format!("`availability` must be a string, found {}", other.kind()),
                );
                None
            }
        };
        let metrics = match top.get("metrics") {
            None | Some(Node::Null) => IndexMap::new(),
            Some(n) => self.metrics(n, &root.join("metrics")),
        };
        let pricing = match top.get("pricing") {
            None | Some(Node::Null) => None,
            Some(n) => self.pricing(n, &root.join("pricing")),
        };
        let defaults = PlanSection {
            pricing: None,
            quotas: self.limit_tree(top.get("quotas"), &root.join("quotas"), false),
            rates: self.limit_tree(top.get("rates"), &root.join("rates"), true),
        };

        let mut plans = IndexMap::new();
        match top.get("plans") {
            None | Some(Node::Null) => {}
            Some(n) => {
                let at = root.join("plans");
                if let Some(map) = self.map(n, &at, "`plans`") {
                    for (name, plan) in map {
                        if let Some(section) = self.plan(plan, &at.join(name)) {
                            plans.insert(name.clone(), section);
                        }
                    }
                }
            }
        }

        let context = context?;
        if context.doc_type == DocumentType::Plans && plans.is_empty() && !has_errors(&self.diagnostics) {
            self.error(Code::NoPlans, &root.join("plans"), "a document of type `plans` must declare at least one plan");
        }
        Some(Sla4oaiDocument { context, infrastructure, availability, metrics, pricing, defaults, plans })
    }

    fn context(&mut self, node: &Node, at: &Pointer) -> Option<Context> {
        let map = self.map(node, at, "`context`")?;
        self.unknown_keys(map, &["id", "sla", "type", "api", "provider", "version", "validity"], at);
        let id = self.string(map, "id", at, true);
        let sla_version = self.string(map, "sla", at, false).or_else(|| self.string(map, "version", at, false));
        let api = self.string(map, "api", at, true);
        let provider = self.string(map, "provider", at, false);
        let doc_type = match self.string(map, "type", at, true)?.as_str() {
            "plans" => DocumentType::Plans,
            "instance" => DocumentType::Instance,
            other => {
                self.error(
                    Code::InvalidContextType,
                    &at.join("type"),
                    format!("`type` must be `plans` or `instance`, found `{other}`"),
                );
                return None;
            }
        };
        Some(Context { id: id?, sla_version: sla_version.unwrap_or_else(|| "1.0".to_string()), doc_type, api: api?, provider })
    }

    fn infrastructure(&mut self, node: &Node, at: &Pointer) -> Option<Infrastructure> {
        if matches!(node, Node::Null) {
            return None;
        }
        let map = self.map(node, at, "`infrastructure`")?;
        self.unknown_keys(map, &["supervisor", "monitor"], at);
        let supervisor = self.string(map, "supervisor", at, true);
        let monitor = self.string(map, "monitor", at, true);
        for (key, value) in [("supervisor", &supervisor), ("monitor", &monitor)] {
            if let Some(v) = value {
                if url::Url::parse(v).is_err() {
                    self.warn(Code::InvalidUri, &at.join(key), format!("`{v}` is not an absolute URI"));
                }
            }
        }
        Some(Infrastructure { supervisor: supervisor?, monitor: monitor? })
    }

    fn metrics(&mut self, node: &Node, at: &Pointer) -> IndexMap<String, MetricSection> {
        let mut out = IndexMap::new();
        let Some(map) = self.map(node, at, "`metrics`") else { return out };
        for (name, def) in map {
            let mat = at.join(name);
            let Ok(mut metric) = Metric::new(name.clone()) else {
                self.error(Code::InvalidType, &mat, "metric names must be non-empty");
                continue;
            };
            let mut relationships = Vec::new();
            if let Some(def) = match def {
                Node::Null => None,
                other => self.map(other, &mat, "a metric definition"),
            } {
                self.unknown_keys(def, &["type", "format", "unit", "description", "resolution", "relationships"], &mat);
                if let Some(t) = self.string(def, "type", &mat, false) {
                    match t.as_str() {
                        "integer" => metric.value_type = MetricType::Integer,
                        "number" => metric.value_type = MetricType::Number,
                        other => self.error(
                            Code::InvalidEnum,
                            &mat.join("type"),
                            format!("metric type must be `integer` or `number`, found `{other}`"),
                        ),
                    }
                }
                metric.format = self.string(def, "format", &mat, false);
                metric.unit = self.string(def, "unit", &mat, false);
                metric.description = self.string(def, "description", &mat, false);
                if let Some(r) = self.string(def, "resolution", &mat, false) {
                    match r.as_str() {
                        "check" => metric.resolution = Some(Resolution::Check),
                        "consumption" => metric.resolution = Some(Resolution::Consumption),
                        other => self.error(
                            Code::InvalidEnum,
                            &mat.join("resolution"),
                            format!("resolution must be `check` or `consumption`, found `{other}`"),
                        ),
                    }
                }
                if let Some(rels) = def.get("relationships") {
                    relationships = self.relationships(rels, &mat.join("relationships"));
                }
            }
            out.insert(name.clone(), MetricSection { metric, relationships });
        }
        // relationship targets must be declared metrics
        for (name, section) in &out {
            for (i, rel) in section.relationships.iter().enumerate() {
                let rat = at.join(name).join("relationships").join(i);
                if !out.contains_key(&rel.target) {
                    self.error(Code::InvalidRelationship, &rat, format!("related metric `{}` is not declared", rel.target));
                } else if &rel.target == name {
                    self.error(Code::InvalidRelationship, &rat, "a metric cannot be related to itself");
                }
            }
        }
        out
    }

    fn relationships(&mut self, node: &Node, at: &Pointer) -> Vec<RelationshipSpec> {
        let Node::Seq(items) = node else {
            self.error(Code::InvalidType, at, "`relationships` must be a sequence");
            return Vec::new();
        };
        let mut out = Vec::new();
        for (i, item) in items.iter().enumerate() {
            let iat = at.join(i);
            let Some(map) = self.map(item, &iat, "a relationship") else { continue };
            self.unknown_keys(map, &["metric", "factor"], &iat);
            let target = self.string(map, "metric", &iat, true);
            let factor = match map.get("factor") {
                None => {
                    self.error(Code::MissingField, &iat.join("factor"), "`factor` is required");
                    None
                }
                Some(n) => self.number(n, &iat.join("factor"), "`factor`"),
            };
            if let Some(f) = &factor {
                if !f.is_positive() {
                    self.error(Code::InvalidRelationship, &iat.join("factor"), "`factor` must be positive");
                    continue;
                }
            }
            if let (Some(target), Some(factor)) = (target, factor) {
                out.push(RelationshipSpec { target, factor });
            }
        }
        out
    }

    fn period(&mut self, node: &Node, at: &Pointer) -> Option<Period> {
        let map = self.map(node, at, "`period`")?;
        self.unknown_keys(map, &["amount", "unit"], at);
        let amount = match map.get("amount") {
            None => Some(1),
            Some(n) => self.positive_int(n, &at.join("amount"), "period `amount`", Code::NonpositivePeriod),
        };
        let unit = match self.string(map, "unit", at, true) {
            Some(u) => match u.parse::<TimeUnit>() {
                Ok(unit) => Some(unit),
                Err(_) => {
                    self.error(Code::InvalidTimeUnit, &at.join("unit"), format!("unknown time unit `{u}`"));
                    None
                }
            },
            None => None,
        };
        Period::new(amount?, unit?).ok()
    }

    fn pricing(&mut self, node: &Node, at: &Pointer) -> Option<PricingSection> {
        let map = self.map(node, at, "`pricing`")?;
        self.unknown_keys(map, &["cost", "custom", "currency", "period", "billing", "overage", "operation"], at);
        let mut section = PricingSection { custom: self.boolean(map, "custom", at), ..Default::default() };
        match map.get("cost") {
            None | Some(Node::Null) => {}
            Some(Node::String(s)) if s.eq_ignore_ascii_case("custom") => section.custom = true,
            Some(n) => section.cost = self.non_negative(n, &at.join("cost"), "`cost`"),
        }
        if section.custom && section.cost.is_some() {
            self.error(Code::InvalidAmount, &at.join("cost"), "a custom cost cannot also state an amount");
        }
        section.currency = self.string(map, "currency", at, false);
        if let Some(p) = map.get("period").filter(|n| !matches!(n, Node::Null)) {
            section.period = self.period(p, &at.join("period"));
        }
        if let Some(n) = map.get("overage") {
            section.overage = self.overage(n, &at.join("overage"));
        }
        if let Some(n) = map.get("operation") {
            section.operation = self.operation_cost(n, &at.join("operation"));
        }
        Some(section)
    }

    fn overage(&mut self, node: &Node, at: &Pointer) -> Option<OverageCost> {
        let map = self.map(node, at, "`overage`")?;
        self.strict_keys(map, &["overage", "cost"], at);
        let unit = match map.get("overage") {
            Some(n) => self.positive_int(n, &at.join("overage"), "overage unit", Code::InvalidAmount),
            None => {
                self.error(Code::MissingField, &at.join("overage"), "`overage` is required");
                None
            }
        };
        let cost = self.required_amount(map, "cost", at);
        OverageCost::new(unit?, cost?).ok()
    }

    fn operation_cost(&mut self, node: &Node, at: &Pointer) -> Option<OperationCost> {
        let map = self.map(node, at, "`operation`")?;
        self.strict_keys(map, &["volume", "cost"], at);
        let volume = match map.get("volume") {
            Some(n) => self.positive_int(n, &at.join("volume"), "`volume`", Code::InvalidAmount),
            None => Some(1),
        };
        let cost = self.required_amount(map, "cost", at);
        OperationCost::new(volume?, cost?).ok()
    }

    fn required_amount(&mut self, map: &IndexMap<String, Node>, key: &str, at: &Pointer) -> Option<Rational> {
        match map.get(key) {
            Some(n) => self.non_negative(n, &at.join(key), &format!("`{key}`")),
            None => {
                self.error(Code::MissingField, &at.join(key), format!("`{key}` is required"));
                None
            }
        }
    }

    fn strict_keys(&mut self, map: &IndexMap<String, Node>, allowed: &[&str], at: &Pointer) {
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                self.error(Code::InvalidType, &at.join(key), format!("unexpected key `{key}`"));
            }
        }
    }

    fn plan(&mut self, node: &Node, at: &Pointer) -> Option<PlanSection> {
        if matches!(node, Node::Null) {
            return Some(PlanSection::default());
        }
        let map = self.map(node, at, "a plan")?;
        self.unknown_keys(map, &["pricing", "quotas", "rates", "configuration", "availability", "guarantees"], at);
        let pricing = match map.get("pricing") {
            None | Some(Node::Null) => None,
            Some(n) => self.pricing(n, &at.join("pricing")),
        };
        Some(PlanSection {
            pricing,
            quotas: self.limit_tree(map.get("quotas"), &at.join("quotas"), false),
            rates: self.limit_tree(map.get("rates"), &at.join("rates"), true),
        })
    }

    fn limit_tree(&mut self, node: Option<&Node>, at: &Pointer, sliding: bool) -> LimitTree {
        let mut tree = LimitTree::default();
        let Some(node) = node.filter(|n| !matches!(n, Node::Null)) else { return tree };
        let Some(paths) = self.map(node, at, "a limit section") else { return tree };
        let mut normalized_seen: IndexMap<String, String> = IndexMap::new();
        for (path, methods) in paths {
            let pat = at.join(path);
            if path.trim().is_empty() {
                self.error(Code::InvalidPath, &pat, "paths must be non-empty");
                continue;
            }
            let normalized = normalize_path(path);
            if let Some(first) = normalized_seen.insert(normalized.clone(), path.clone()) {
                self.error(
                    Code::DuplicatePattern,
                    &pat,
                    format!("`{path}` and `{first}` both normalize to `{normalized}`"),
                );
                continue;
            }
            let Some(methods) = self.map(methods, &pat, "a path entry") else { continue };
            let mut by_method = IndexMap::new();
            for (method, metrics) in methods {
                let mat = pat.join(method);
                let Ok(m) = method.parse::<HttpMethod>() else {
                    self.error(Code::InvalidMethod, &mat, format!("unknown HTTP method `{method}`"));
                    continue;
                };
                if by_method.contains_key(&m) {
                    self.error(Code::DuplicatePattern, &mat, format!("method `{method}` appears twice"));
                    continue;
                }
                let Some(metrics) = self.map(metrics, &mat, "a method entry") else { continue };
                let mut by_metric = IndexMap::new();
                for (metric, limits) in metrics {
                    let limits = self.limits(limits, &mat.join(metric), sliding);
                    by_metric.insert(metric.clone(), limits);
                }
                by_method.insert(m, by_metric);
            }
            tree.entries.insert(path.clone(), by_method);
        }
        tree
    }

    fn limits(&mut self, node: &Node, at: &Pointer, sliding: bool) -> Vec<RawLimit> {
        let items: Vec<(Pointer, &Node)> = match node {
            Node::Seq(items) => items.iter().enumerate().map(|(i, n)| (at.join(i), n)).collect(),
            Node::Map(_) => vec![(at.clone(), node)],
            other => {
                self.error(Code::InvalidType, at, format!("limits must be a sequence, found {}", other.kind()));
                return Vec::new();
            }
        };
        if items.is_empty() {
            self.error(Code::MissingField, at, "at least one limit is required");
        }
        let mut out = Vec::new();
        let mut costed = 0;
        for (iat, item) in items {
            if let Some(limit) = self.limit(item, &iat, sliding) {
                if limit.cost.is_some() {
                    costed += 1;
                    if costed > 1 {
                        self.error(Code::MultipleLimitCosts, &iat.join("cost"), "only one limit per metric may carry a cost");
                    }
                }
                out.push(limit);
            }
        }
        out
    }

    fn limit(&mut self, node: &Node, at: &Pointer, sliding: bool) -> Option<RawLimit> {
        let map = self.map(node, at, "a limit")?;
        self.unknown_keys(map, &["max", "period", "cost", "custom", "threshold_type", "scope"], at);
        let custom = self.boolean(map, "custom", at);
        let threshold = match (map.get("max"), custom) {
            (Some(n), true) if !matches!(n, Node::Null) => {
                self.error(Code::InvalidMax, &at.join("max"), "a custom limit cannot also state `max`");
                return None;
            }
            (_, true) => Threshold::Custom,
            (None | Some(Node::Null), false) => Threshold::Unlimited,
            (Some(Node::String(s)), false) if s.eq_ignore_ascii_case("unlimited") => Threshold::Unlimited,
            (Some(Node::Number(n)), false) => match parse_decimal(n) {
                Some(v) if is_integer(&v) => Threshold::Value(v),
                _ => {
                    self.error(Code::InvalidMax, &at.join("max"), format!("`max` must be an integer, found `{n}`"));
                    return None;
                }
            },
            (Some(other), false) => {
                self.error(
                    Code::InvalidMax,
                    &at.join("max"),
                    format!("`max` must be an integer or `unlimited`, found {}", other.kind()),
                );
                return None;
            }
        };
        let threshold_type = match self.string(map, "threshold_type", at, false) {
            None => ThresholdType::Max,
            Some(t) => match t.parse::<ThresholdType>() {
                Ok(tt) => tt,
                Err(_) => {
                    self.error(
                        Code::UnsupportedThresholdType,
                        &at.join("threshold_type"),
                        format!("threshold type `{t}` is not supported (only MAX)"),
                    );
                    return None;
                }
            },
        };
        let period = match map.get("period") {
            None => {
                if sliding {
                    self.warn(Code::RatePeriodInherited, at, "rate has no `period`; the billing period applies");
                }
                PeriodSpec::Inherit
            }
            Some(Node::Null) => PeriodSpec::Absent,
            Some(n) => PeriodSpec::Explicit(self.period(n, &at.join("period"))?),
        };
        let cost = match map.get("cost") {
            None | Some(Node::Null) => None,
            Some(n) => Some(self.limit_cost(n, &at.join("cost"))?),
        };
        Some(RawLimit { threshold, threshold_type, period, cost })
    }

    fn limit_cost(&mut self, node: &Node, at: &Pointer) -> Option<LimitCost> {
        let map = self.map(node, at, "a limit cost")?;
        self.strict_keys(map, &["overage", "operation"], at);
        match (map.get("overage"), map.get("operation")) {
            (Some(o), None) => self.overage(o, &at.join("overage")).map(LimitCost::Overage),
            (None, Some(o)) => self.operation_cost(o, &at.join("operation")).map(LimitCost::Operation),
            (Some(_), Some(_)) => {
                self.error(Code::InvalidType, at, "a limit cost is either `overage` or `operation`, not both");
                None
            }
            (None, None) => {
                self.error(Code::MissingField, at, "a limit cost needs `overage` or `operation`");
                None
            }
        }
    }
}
