//! Pricing model → SLA4OAI document. Output is canonical: every period is
//! explicit, limitations are grouped by path, method and metric in model order.

use indexmap::IndexMap;

use crate::model::{Cost, CostKind, LimitCost, OperationCost, OverageCost, Period, Plan, Pricing, Threshold, ThresholdLimit, WindowKind};
use crate::rational::{to_decimal_string, Rational};

use super::document::{DocumentType, Format};
use super::value::{emit_json, emit_yaml, Node};

/// The `context` block written with a serialized pricing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WriteContext {
    pub id: String,
    pub api: String,
    pub provider: Option<String>,
}

impl Default for WriteContext {
    fn default() -> Self {
        WriteContext { id: "pricing".to_string(), api: "./openapi.yaml".to_string(), provider: None }
    }
}

pub fn serialize_document(pricing: &Pricing, format: Format) -> Vec<u8> {
    serialize_with_context(pricing, &WriteContext::default(), format)
}

pub fn serialize_with_context(pricing: &Pricing, context: &WriteContext, format: Format) -> Vec<u8> {
    let node = to_node(pricing, context);
    match format {
        Format::Json => emit_json(&node),
        Format::Yaml | Format::Auto => emit_yaml(&node),
    }
    .into_bytes()
}

pub fn to_node(pricing: &Pricing, context: &WriteContext) -> Node {
    let mut ctx = vec![
        ("id", Node::str(&context.id)),
        ("sla", Node::str("1.0")),
        ("type", Node::str(DocumentType::Plans.as_str())),
        ("api", Node::str(&context.api)),
    ];
    if let Some(p) = &context.provider {
        ctx.push(("provider", Node::str(p)));
    }

    let mut metrics = IndexMap::new();
    for m in pricing.metrics() {
        let mut def = vec![("type", Node::str(m.value_type.as_str()))];
        let optional = [("format", &m.format), ("unit", &m.unit), ("description", &m.description)];
        for (key, value) in optional {
            if let Some(v) = value {
                def.push((key, Node::str(v)));
            }
        }
        if let Some(r) = m.resolution {
            def.push(("resolution", Node::str(r.as_str())));
        }
        let rels: Vec<Node> = pricing
            .relationships()
            .iter()
            .filter(|r| r.metric_a() == m.name)
            .map(|r| Node::map([("metric", Node::str(r.metric_b())), ("factor", number(r.factor()))]))
            .collect();
        if !rels.is_empty() {
            def.push(("relationships", Node::Seq(rels)));
        }
        metrics.insert(m.name.clone(), Node::map(def));
    }

    let plans: IndexMap<String, Node> = pricing.plans().map(|p| (p.name().to_string(), plan_node(p))).collect();
    Node::map([
        ("context", Node::map(ctx)),
        ("metrics", Node::Map(metrics)),
        ("pricing", Node::map([("currency", Node::str(pricing.currency()))])),
        ("plans", Node::Map(plans)),
    ])
}

fn plan_node(plan: &Plan) -> Node {
    let mut entries = vec![("pricing", cost_node(plan.cost()))];
    for window in [WindowKind::Quota, WindowKind::Rate] {
        // path → method → metric → limits
        let mut tree: IndexMap<String, IndexMap<String, IndexMap<String, Node>>> = IndexMap::new();
        for l in plan.limitations().iter().filter(|l| l.window() == window) {
            let mut limits: Vec<Node> = l.limits().iter().map(limit_node).collect();
            if let (Some(cost), Some(Node::Map(first))) = (l.cost(), limits.first_mut()) {
                first.insert("cost".to_string(), limit_cost_node(cost));
            }
            tree.entry(l.operation().path().to_string())
                .or_default()
                .entry(l.operation().method().as_str().to_string())
                .or_default()
                .insert(l.metric().to_string(), Node::Seq(limits));
        }
        if !tree.is_empty() {
            let node = tree
                .into_iter()
                .map(|(path, methods)| {
                    let methods = methods.into_iter().map(|(m, metrics)| (m, Node::Map(metrics)));
                    (path, Node::map(methods))
                })
                .collect();
            entries.push((window.section(), Node::Map(node)));
        }
    }
    Node::map(entries)
}

fn cost_node(cost: &Cost) -> Node {
    let mut entries = match cost.kind() {
        CostKind::Fixed(a) => vec![("cost", number(a))],
        CostKind::Custom => vec![("custom", Node::Bool(true))],
    };
    entries.push(("currency", Node::str(cost.currency())));
    entries.push(("period", period_node(cost.period())));
    if let Some(o) = cost.overage() {
        entries.push(("overage", overage_node(o)));
    }
    if let Some(o) = cost.operation_cost() {
        entries.push(("operation", operation_node(o)));
    }
    Node::map(entries)
}

fn limit_node(limit: &ThresholdLimit) -> Node {
    let mut entries = Vec::new();
    match &limit.threshold {
        Threshold::Value(v) => entries.push(("max", number(v))),
        Threshold::Unlimited => {}
        Threshold::Custom => entries.push(("custom", Node::Bool(true))),
    }
    entries.push(("period", limit.period.map(period_node).unwrap_or(Node::Null)));
    Node::map(entries)
}

fn limit_cost_node(cost: &LimitCost) -> Node {
    match cost {
        LimitCost::Overage(o) => Node::map([("overage", overage_node(o))]),
        LimitCost::Operation(o) => Node::map([("operation", operation_node(o))]),
    }
}

fn overage_node(o: &OverageCost) -> Node {
    Node::map([("overage", Node::Number(o.overage_unit.to_string())), ("cost", number(&o.unit_cost))])
}

fn operation_node(o: &OperationCost) -> Node {
    Node::map([("volume", Node::Number(o.volume.to_string())), ("cost", number(&o.unit_cost))])
}

fn period_node(p: Period) -> Node {
    Node::map([("amount", Node::Number(p.amount().to_string())), ("unit", Node::str(p.unit().as_str()))])
}

fn number(r: &Rational) -> Node {
    Node::Number(to_decimal_string(r))
}
