//! Capacities used by the analysis: declared ones from a sidecar file, or a
//! default derived from the limits themselves.

use num::Signed;
use thiserror::Error;

use crate::model::{ApiOperation, Capacity, HttpMethod, Limitation, Period, Provenance, TimeUnit};
use crate::rational::{parse_decimal, Rational};
use crate::sla4oai::{normalize_path, parse_yaml, Node, Pointer};

use super::numeric_limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no numeric, period-bearing limit on `{metric}` to derive a capacity from")]
pub struct NoCapacityDerivable {
    pub metric: String,
}

/// The limit with the greatest uniform throughput (threshold / period)
/// becomes the capacity, keeping its own threshold and period. Ties go to the
/// shorter period.
pub fn derive_default_capacity(limitations: &[Limitation], metric: &str) -> Result<Capacity, NoCapacityDerivable> {
    let mut best: Option<(Rational, &Rational, Period)> = None;
    for l in limitations.iter().filter(|l| l.metric() == metric) {
        for (_, threshold, period) in numeric_limits(l) {
            if !threshold.is_positive() {
                continue;
            }
            let rate = threshold / period.seconds();
            let better = match &best {
                None => true,
                Some((r, _, p)) => rate > *r || (rate == *r && period.seconds() < p.seconds()),
            };
            if better {
                best = Some((rate, threshold, period));
            }
        }
    }
    let (_, threshold, period) = best.ok_or_else(|| NoCapacityDerivable { metric: metric.to_string() })?;
    Ok(Capacity::new(metric, threshold.clone(), period, Provenance::DerivedDefault).expect("threshold is positive"))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SidecarError {
    #[error("capacity file is not valid YAML (line {line}, column {column}): {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("capacity file at {location}: {message}")]
    Shape { location: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct DeclaredCapacity {
    path: String,
    method: HttpMethod,
    capacity: Capacity,
}

/// Capacities declared per (path, method, metric). Method `all` acts as a
/// fallback for methods without their own entry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CapacityTable {
    entries: Vec<DeclaredCapacity>,
}

impl CapacityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, path: &str, method: HttpMethod, capacity: Capacity) {
        let path = normalize_path(path);
        self.entries.retain(|e| !(e.path == path && e.method == method && e.capacity.metric() == capacity.metric()));
        self.entries.push(DeclaredCapacity { path, method, capacity });
    }

    pub fn with(mut self, path: &str, method: HttpMethod, capacity: Capacity) -> Self {
        self.insert(path, method, capacity);
        self
    }

    pub fn lookup(&self, operation: &ApiOperation, metric: &str) -> Option<&Capacity> {
        let path = normalize_path(operation.path());
        let find = |method: HttpMethod| {
            self.entries
                .iter()
                .find(|e| e.path == path && e.method == method && e.capacity.metric() == metric)
                .map(|e| &e.capacity)
        };
        find(operation.method()).or_else(|| find(HttpMethod::All))
    }

    /// Reads `path → method → metric → {threshold, period: {amount, unit}}`.
    pub fn from_yaml(text: &str) -> Result<Self, SidecarError> {
        let root = parse_yaml(text)
            .map_err(|f| SidecarError::Syntax { line: f.line, column: f.column, message: f.message })?;
        let mut table = CapacityTable::new();
        let shape = |location: String, message: &str| SidecarError::Shape { location, message: message.to_string() };
        let paths = match &root {
            Node::Null => return Ok(table),
            Node::Map(m) => m,
            _ => return Err(shape(String::new(), "expected a mapping of paths")),
        };
        for (path, methods) in paths {
            let pat = Pointer::root().join(path);
            let methods = methods.as_map().ok_or_else(|| shape(pat.to_string(), "expected a mapping of methods"))?;
            for (method, metrics) in methods {
                let at = pat.join(method);
                let m: HttpMethod = method.parse().map_err(|_| shape(at.to_string(), "unknown HTTP method"))?;
                let metrics = metrics.as_map().ok_or_else(|| shape(at.to_string(), "expected a mapping of metrics"))?;
                for (metric, spec) in metrics {
                    let capacity = read_capacity(metric, spec).map_err(|msg| shape(at.join(metric).to_string(), msg))?;
                    table.insert(path, m, capacity);
                }
            }
        }
        Ok(table)
    }
}

fn read_capacity(metric: &str, spec: &Node) -> Result<Capacity, &'static str> {
    let threshold = match spec.get("threshold") {
        Some(Node::Number(n)) => parse_decimal(n).ok_or("`threshold` must be a number")?,
        _ => return Err("`threshold` must be a number"),
    };
    let period = match spec.get("period") {
        None => Period::one(TimeUnit::Second),
        Some(p) => {
            let amount = match p.get("amount") {
                None => 1,
                Some(Node::Number(n)) => n.parse::<u64>().map_err(|_| "period `amount` must be a positive integer")?,
                _ => return Err("period `amount` must be a positive integer"),
            };
            let unit = match p.get("unit") {
                Some(Node::String(u)) => u.parse::<TimeUnit>().map_err(|_| "unknown time unit")?,
                _ => return Err("period `unit` is required"),
            };
            Period::new(amount, unit).map_err(|_| "period `amount` must be a positive integer")?
        }
    };
    Capacity::new(metric, threshold, period, Provenance::Declared).map_err(|_| "capacity threshold must be positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ThresholdLimit, WindowKind};
    use crate::rational::int;

    fn limitation(limits: Vec<ThresholdLimit>) -> Limitation {
        let op = ApiOperation::new("/a", HttpMethod::Get).unwrap();
        Limitation::new(op, "requests", WindowKind::Rate, limits, None).unwrap()
    }

    #[test]
    fn strongest_uniform_rate_wins() {
        let ls = [limitation(vec![ThresholdLimit::per(1, 1, TimeUnit::Second), ThresholdLimit::per(100, 1, TimeUnit::Week)])];
        let cap = derive_default_capacity(&ls, "requests").unwrap();
        assert_eq!((cap.threshold(), cap.period()), (&int(1), Period::one(TimeUnit::Second)));
        assert_eq!(cap.provenance(), Provenance::DerivedDefault);

        let ls = [limitation(vec![ThresholdLimit::per(60, 1, TimeUnit::Minute), ThresholdLimit::per(2, 1, TimeUnit::Second)])];
        assert_eq!(derive_default_capacity(&ls, "requests").unwrap().threshold(), &int(2));

        let ls = [limitation(vec![ThresholdLimit::per(100, 1, TimeUnit::Week)])];
        let cap = derive_default_capacity(&ls, "requests").unwrap();
        assert_eq!((cap.threshold(), cap.period()), (&int(100), Period::one(TimeUnit::Week)));
    }

    #[test]
    fn equal_rates_prefer_shorter_period() {
        let ls = [limitation(vec![ThresholdLimit::per(60, 1, TimeUnit::Minute), ThresholdLimit::per(1, 1, TimeUnit::Second)])];
        let cap = derive_default_capacity(&ls, "requests").unwrap();
        assert_eq!(cap.period(), Period::one(TimeUnit::Second));
    }

    #[test]
    fn nothing_to_derive_from() {
        let ls = [limitation(vec![ThresholdLimit::new(crate::model::Threshold::Unlimited, None)])];
        assert!(derive_default_capacity(&ls, "requests").is_err());
        assert!(derive_default_capacity(&ls, "bytes").is_err());
    }

    #[test]
    fn sidecar_lookup_falls_back_to_all() {
        let table = CapacityTable::from_yaml(
            "/a:\n  all:\n    requests: {threshold: 100, period: {amount: 1, unit: second}}\n  get:\n    requests: {threshold: 5}\n",
        )
        .unwrap();
        let get = ApiOperation::new("/a", HttpMethod::Get).unwrap();
        let post = ApiOperation::new("/a", HttpMethod::Post).unwrap();
        assert_eq!(table.lookup(&get, "requests").unwrap().threshold(), &int(5));
        assert_eq!(table.lookup(&post, "requests").unwrap().threshold(), &int(100));
        assert!(table.lookup(&post, "matches").is_none());
    }

    #[test]
    fn sidecar_errors() {
        assert!(matches!(CapacityTable::from_yaml("/a: [1"), Err(SidecarError::Syntax { .. })));
        let err = CapacityTable::from_yaml("/a: {get: {requests: {threshold: 0}}}").unwrap_err();
        assert_eq!(err.to_string(), "capacity file at /~1a/get/requests: capacity threshold must be positive");
        assert!(CapacityTable::from_yaml("/a: {fetch: {requests: {threshold: 1}}}").is_err());
    }
}
