use std::collections::HashSet;

use indexmap::IndexMap;
use num::{Signed, Zero};

use crate::rational::Rational;

use super::cost::Cost;
use super::limit::{ApiOperation, Limitation, WindowKind};
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricType {
    #[default]
    Integer,
    Number,
}

impl MetricType {
    pub const fn as_str(self) -> &'static str {
        match self {
            MetricType::Integer => "integer",
            MetricType::Number => "number",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    Check,
    Consumption,
}

impl Resolution {
    pub const fn as_str(self) -> &'static str {
        match self {
            Resolution::Check => "check",
            Resolution::Consumption => "consumption",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    pub name: String,
    pub value_type: MetricType,
    pub format: Option<String>,
    pub unit: Option<String>,
    pub description: Option<String>,
    pub resolution: Option<Resolution>,
}

impl Metric {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModelError::EmptyMetricName);
        }
        Ok(Metric { name, value_type: MetricType::Integer, format: None, unit: None, description: None, resolution: None })
    }
}

/// One unit of `metric_a` consumes `factor` units of `metric_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricRelationship {
    metric_a: String,
    metric_b: String,
    factor: Rational,
}

impl MetricRelationship {
    pub fn new(metric_a: impl Into<String>, metric_b: impl Into<String>, factor: Rational) -> Result<Self, ModelError> {
        let (metric_a, metric_b) = (metric_a.into(), metric_b.into());
        if factor.is_negative() || factor.is_zero() {
            return Err(ModelError::NonPositiveFactor);
        }
        if metric_a == metric_b {
            return Err(ModelError::SelfRelationship(metric_a));
        }
        Ok(MetricRelationship { metric_a, metric_b, factor })
    }

    pub fn metric_a(&self) -> &str {
        &self.metric_a
    }

    pub fn metric_b(&self) -> &str {
        &self.metric_b
    }

    pub fn factor(&self) -> &Rational {
        &self.factor
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    name: String,
    cost: Cost,
    limitations: Vec<Limitation>,
}

impl Plan {
    /// Limitations are kept in canonical (window, operation, metric) order.
    pub fn new(name: impl Into<String>, cost: Cost, mut limitations: Vec<Limitation>) -> Result<Self, ModelError> {
        let name = name.into();
        limitations.sort_by(|a, b| {
            (a.window(), a.operation(), a.metric()).cmp(&(b.window(), b.operation(), b.metric()))
        });
        let mut seen: HashSet<(&ApiOperation, &str, WindowKind)> = HashSet::new();
        for l in &limitations {
            if !seen.insert((l.operation(), l.metric(), l.window())) {
                return Err(ModelError::DuplicateLimitation {
                    plan: name.clone(),
                    operation: l.operation().to_string(),
                    metric: l.metric().to_string(),
                    window: l.window(),
                });
            }
        }
        Ok(Plan { name, cost, limitations })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cost(&self) -> &Cost {
        &self.cost
    }

    pub fn limitations(&self) -> &[Limitation] {
        &self.limitations
    }

    pub fn with_limitations(&self, limitations: Vec<Limitation>) -> Result<Self, ModelError> {
        Plan::new(self.name.clone(), self.cost.clone(), limitations)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pricing {
    plans: IndexMap<String, Plan>,
    metrics: IndexMap<String, Metric>,
    relationships: Vec<MetricRelationship>,
    currency: String,
}

impl Pricing {
    pub fn new(
        plans: Vec<Plan>,
        metrics: Vec<Metric>,
        mut relationships: Vec<MetricRelationship>,
        currency: impl Into<String>,
    ) -> Result<Self, ModelError> {
        relationships.sort_by(|a, b| (a.metric_a(), a.metric_b()).cmp(&(b.metric_a(), b.metric_b())));
        let metrics: IndexMap<String, Metric> = metrics.into_iter().map(|m| (m.name.clone(), m)).collect();
        let mut by_name = IndexMap::new();
        for plan in plans {
            for l in plan.limitations() {
                if !metrics.contains_key(l.metric()) {
                    return Err(ModelError::UndeclaredMetric(l.metric().to_string()));
                }
            }
            if by_name.contains_key(plan.name()) {
                return Err(ModelError::DuplicatePlan(plan.name().to_string()));
            }
            by_name.insert(plan.name().to_string(), plan);
        }
        for r in &relationships {
            for m in [r.metric_a(), r.metric_b()] {
                if !metrics.contains_key(m) {
                    return Err(ModelError::UndeclaredMetric(m.to_string()));
                }
            }
        }
        Ok(Pricing { plans: by_name, metrics, relationships, currency: currency.into() })
    }

    pub fn plans(&self) -> impl Iterator<Item = &Plan> {
        self.plans.values()
    }

    pub fn plan(&self, name: &str) -> Option<&Plan> {
        self.plans.get(name)
    }

    pub fn plan_count(&self) -> usize {
        self.plans.len()
    }

    pub fn metrics(&self) -> impl Iterator<Item = &Metric> {
        self.metrics.values()
    }

    pub fn metric(&self, name: &str) -> Option<&Metric> {
        self.metrics.get(name)
    }

    pub fn relationships(&self) -> &[MetricRelationship] {
        &self.relationships
    }

    pub fn currency(&self) -> &str {
        &self.currency
    }

    /// Rebuilds the pricing with each plan transformed by `f`.
    pub fn map_plans(&self, mut f: impl FnMut(&Plan) -> Plan) -> Result<Self, ModelError> {
        Pricing::new(
            self.plans.values().map(&mut f).collect(),
            self.metrics.values().cloned().collect(),
            self.relationships.clone(),
            self.currency.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{HttpMethod, Period, ThresholdLimit, TimeUnit};
    use crate::rational::{int, ratio};

    fn quota(path: &str, metric: &str) -> Limitation {
        Limitation::new(
            ApiOperation::new(path, HttpMethod::Post).unwrap(),
            metric,
            WindowKind::Quota,
            vec![ThresholdLimit::per(10, 1, TimeUnit::Day)],
            None,
        )
        .unwrap()
    }

    fn cost() -> Cost {
        Cost::fixed(int(10), "USD", Period::one(TimeUnit::Month)).unwrap()
    }

    #[test]
    fn plan_rejects_duplicate_triples() {
        let err = Plan::new("p", cost(), vec![quota("/a", "requests"), quota("/a", "requests")]).unwrap_err();
        assert!(matches!(err, ModelError::DuplicateLimitation { .. }));
        assert!(Plan::new("p", cost(), vec![quota("/a", "requests"), quota("/b", "requests")]).is_ok());
    }

    #[test]
    fn pricing_checks_metric_references() {
        let plan = Plan::new("p", cost(), vec![quota("/a", "matches")]).unwrap();
        let err = Pricing::new(vec![plan.clone()], vec![Metric::new("requests").unwrap()], vec![], "USD").unwrap_err();
        assert_eq!(err, ModelError::UndeclaredMetric("matches".into()));

        let metrics = vec![Metric::new("matches").unwrap()];
        let rel = MetricRelationship::new("matches", "kb", int(2)).unwrap();
        assert_eq!(
            Pricing::new(vec![plan.clone()], metrics.clone(), vec![rel], "USD").unwrap_err(),
            ModelError::UndeclaredMetric("kb".into())
        );
        assert_eq!(
            Pricing::new(vec![plan.clone(), plan], metrics, vec![], "USD").unwrap_err(),
            ModelError::DuplicatePlan("p".into())
        );
    }

    #[test]
    fn relationship_invariants() {
        assert!(MetricRelationship::new("requests", "kb", ratio(1, 2)).is_ok());
        assert_eq!(MetricRelationship::new("requests", "kb", int(0)), Err(ModelError::NonPositiveFactor));
        assert!(MetricRelationship::new("requests", "requests", int(1)).is_err());
        assert_eq!(Metric::new(""), Err(ModelError::EmptyMetricName));
    }
}
