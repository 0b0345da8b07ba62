//! Builds the pricing model from a parsed document and its resolved limitations.

use crate::model::{Cost, MetricRelationship, Plan, Pricing};
use crate::rational::int;

use super::diagnostic::{Code, Diagnostic};
use super::document::{PricingSection, Sla4oaiDocument};
use super::resolve::{billing_period, plan_sections, GlobResolution};
use super::value::Pointer;

pub const DEFAULT_CURRENCY: &str = "USD";

#[derive(Debug, Clone, PartialEq)]
pub struct Lowered {
    pub pricing: Pricing,
    pub warnings: Vec<Diagnostic>,
}

pub fn lower_to_model(doc: &Sla4oaiDocument, resolution: &GlobResolution) -> Result<Lowered, Vec<Diagnostic>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();

    for r in &resolution.limitations {
        if !doc.metrics.contains_key(r.limitation.metric()) {
            errors.push(Diagnostic::error(
                Code::UndeclaredMetric,
                &r.source.pointer,
                format!("metric `{}` is not declared under `metrics`", r.limitation.metric()),
            ));
        }
    }
    errors.dedup_by(|a, b| a.location == b.location);

    let doc_pricing = doc.pricing.clone().unwrap_or_default();
    let doc_currency = doc_pricing.currency.clone().unwrap_or_else(|| DEFAULT_CURRENCY.to_string());

    let mut plans = Vec::new();
    for (name, at, section) in plan_sections(doc) {
        let own = section.pricing.clone().unwrap_or_default();
        let (period, defaulted) = billing_period(doc, section);
        if defaulted {
            warnings.push(Diagnostic::warning(
                Code::DefaultBillingPeriod,
                &at,
                format!("plan `{name}` states no billing period; assuming 1 month"),
            ));
        }
        let currency = own.currency.clone().unwrap_or_else(|| doc_currency.clone());
        let cost = match plan_cost(&own, &doc_pricing, currency, period) {
            Some(cost) => cost,
            None => {
                warnings.push(Diagnostic::warning(
                    Code::MissingCost,
                    &at,
                    format!("plan `{name}` states no cost; assuming 0"),
                ));
                Cost::fixed(int(0), own.currency.clone().unwrap_or_else(|| doc_currency.clone()), period)
                    .expect("zero is non-negative")
            }
        };
        let limitations =
            resolution.limitations.iter().filter(|r| r.plan == name).map(|r| r.limitation.clone()).collect();
        match Plan::new(name.clone(), cost, limitations) {
            Ok(plan) => plans.push(plan),
            Err(e) => errors.push(Diagnostic::error(Code::InvalidModel, &at, e.to_string())),
        }
    }

    let mut relationships = Vec::new();
    for (name, section) in &doc.metrics {
        for (i, rel) in section.relationships.iter().enumerate() {
            match MetricRelationship::new(name.clone(), rel.target.clone(), rel.factor.clone()) {
                Ok(r) => relationships.push(r),
                Err(e) => errors.push(Diagnostic::error(
                    Code::InvalidRelationship,
                    &Pointer::root().join("metrics").join(name).join("relationships").join(i),
                    e.to_string(),
                )),
            }
        }
    }

    if !errors.is_empty() {
        errors.extend(warnings);
        return Err(errors);
    }
    let metrics = doc.metrics.values().map(|s| s.metric.clone()).collect();
    match Pricing::new(plans, metrics, relationships, doc_currency) {
        Ok(pricing) => Ok(Lowered { pricing, warnings }),
        Err(e) => Err(vec![Diagnostic::error(Code::InvalidModel, &Pointer::root(), e.to_string())]),
    }
}

/// Plan-level fields win over document-level ones. `None` when neither states a cost.
fn plan_cost(own: &PricingSection, doc: &PricingSection, currency: String, period: crate::model::Period) -> Option<Cost> {
    let mut cost = if own.custom {
        Cost::custom(currency, period)
    } else if let Some(amount) = &own.cost {
        Cost::fixed(amount.clone(), currency, period).ok()?
    } else if doc.custom {
        Cost::custom(currency, period)
    } else {
        Cost::fixed(doc.cost.clone()?, currency, period).ok()?
    };
    if let Some(o) = own.overage.clone().or_else(|| doc.overage.clone()) {
        cost = cost.with_overage(o);
    }
    if let Some(o) = own.operation.clone().or_else(|| doc.operation.clone()) {
        cost = cost.with_operation_cost(o);
    }
    Some(cost)
}
