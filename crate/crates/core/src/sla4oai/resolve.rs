//! Expands glob entries over concrete operations. For each (plan, operation,
//! metric, window kind) the highest-priority matching entry wins; equal
//! priorities are a `GLOB_TIE` error.

use std::collections::{BTreeMap, HashSet};

use crate::model::{ApiOperation, HttpMethod, LimitCost, Limitation, Period, ThresholdLimit, TimeUnit, WindowKind};

use super::diagnostic::{Code, Diagnostic};
use super::document::{DocumentType, LimitTree, PeriodSpec, PlanSection, RawLimit, Sla4oaiDocument};
use super::glob::{EntryPriority, GlobPattern};
use super::oas::OperationSet;
use super::value::Pointer;

/// Where a concrete limitation came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitSource {
    pub plan: String,
    pub window: WindowKind,
    /// The path key as written in the document.
    pub pattern: String,
    pub method: HttpMethod,
    pub metric: String,
    /// Pointer to the metric's limit list.
    pub pointer: Pointer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedLimitation {
    pub plan: String,
    pub limitation: Limitation,
    pub source: LimitSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobResolution {
    pub limitations: Vec<ResolvedLimitation>,
    pub warnings: Vec<Diagnostic>,
}

/// The plans a document defines. An instance document without plans has one
/// implicit plan named after its context id.
pub fn plan_sections(doc: &Sla4oaiDocument) -> Vec<(String, Pointer, &PlanSection)> {
    if doc.plans.is_empty() && doc.context.doc_type == DocumentType::Instance {
        return vec![(doc.context.id.clone(), Pointer::root(), &doc.defaults)];
    }
    doc.plans
        .iter()
        .map(|(name, section)| (name.clone(), Pointer::root().join("plans").join(name), section))
        .collect()
}

/// Billing period of a plan and whether it fell back to the default month.
pub fn billing_period(doc: &Sla4oaiDocument, plan: &PlanSection) -> (Period, bool) {
    plan.pricing
        .as_ref()
        .and_then(|p| p.period)
        .or_else(|| doc.pricing.as_ref().and_then(|p| p.period))
        .map(|p| (p, false))
        .unwrap_or((Period::one(TimeUnit::Month), true))
}

struct Candidate<'a> {
    pattern: GlobPattern,
    method: HttpMethod,
    metric: &'a str,
    limits: &'a [RawLimit],
    pointer: Pointer,
}

impl Candidate<'_> {
    fn priority(&self) -> EntryPriority {
        EntryPriority::of(&self.pattern, self.method)
    }

    fn applies_to(&self, op: &ApiOperation) -> bool {
        (self.method == op.method() || self.method.is_all()) && self.pattern.matches(op.path())
    }
}

fn candidates<'a>(tree: &'a LimitTree, at: &Pointer, out: &mut Vec<Candidate<'a>>) {
    for (raw, methods) in &tree.entries {
        for (method, metrics) in methods {
            for (metric, limits) in metrics {
                out.push(Candidate {
                    pattern: GlobPattern::new(raw),
                    method: *method,
                    metric,
                    limits,
                    pointer: at.join(raw).join(method).join(metric),
                });
            }
        }
    }
}

pub fn resolve_globs(doc: &Sla4oaiDocument, operations: &OperationSet) -> Result<GlobResolution, Vec<Diagnostic>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let mut out = Vec::new();
    let sections = plan_sections(doc);
    let uses_defaults = !std::ptr::eq(sections.first().map(|s| s.2).unwrap_or(&doc.defaults), &doc.defaults);

    for (plan_name, plan_at, section) in &sections {
        let (billing, _) = billing_period(doc, section);
        for window in [WindowKind::Quota, WindowKind::Rate] {
            let mut cands = Vec::new();
            candidates(section.tree(window), &plan_at.join(window.section()), &mut cands);
            if uses_defaults {
                let own: HashSet<(String, HttpMethod, &str)> =
                    cands.iter().map(|c| (c.pattern.normalized().to_string(), c.method, c.metric)).collect();
                let mut defaults = Vec::new();
                candidates(doc.defaults.tree(window), &Pointer::root().join(window.section()), &mut defaults);
                cands.extend(
                    defaults
                        .into_iter()
                        .filter(|d| !own.contains(&(d.pattern.normalized().to_string(), d.method, d.metric))),
                );
            }

            if !operations.linked {
                for c in cands.iter().filter(|c| c.pattern.is_glob()) {
                    warnings.push(Diagnostic::warning(
                        Code::GlobUnresolved,
                        &c.pointer,
                        format!("pattern `{}` cannot be expanded without an OpenAPI document; ignored", c.pattern.raw()),
                    ));
                }
            }

            // (operation, metric) → matching candidates
            let mut matched: BTreeMap<(&ApiOperation, &str), Vec<&Candidate>> = BTreeMap::new();
            for op in &operations.operations {
                for c in cands.iter().filter(|c| c.applies_to(op)) {
                    matched.entry((op, c.metric)).or_default().push(c);
                }
            }

            for ((op, metric), mut group) in matched {
                group.sort_by_key(|e| std::cmp::Reverse(e.priority()));
                if group.len() > 1 && group[0].priority() == group[1].priority() {
                    let tied: Vec<String> = group
                        .iter()
                        .take_while(|c| c.priority() == group[0].priority())
                        .map(|c| format!("`{} {}`", c.pattern.raw(), c.method))
                        .collect();
                    errors.push(Diagnostic::error(
                        Code::GlobTie,
                        &group[0].pointer,
                        format!(
                            "{} {} limits on {op}: entries {} are equally specific",
                            window.as_str(),
                            metric,
                            tied.join(" and ")
                        ),
                    ));
                    continue;
                }
                let winner = group[0];
                match build_limitation(op, winner, window, billing) {
                    Some(limitation) => out.push(ResolvedLimitation {
                        plan: plan_name.clone(),
                        limitation,
                        source: LimitSource {
                            plan: plan_name.clone(),
                            window,
                            pattern: winner.pattern.raw().to_string(),
                            method: winner.method,
                            metric: metric.to_string(),
                            pointer: winner.pointer.clone(),
                        },
                    }),
                    None => continue,
                }
            }
        }
    }

    if errors.is_empty() {
        Ok(GlobResolution { limitations: out, warnings })
    } else {
        errors.extend(warnings);
        Err(errors)
    }
}

fn build_limitation(op: &ApiOperation, c: &Candidate, window: WindowKind, billing: Period) -> Option<Limitation> {
    let limits: Vec<ThresholdLimit> = c
        .limits
        .iter()
        .map(|raw| ThresholdLimit {
            threshold: raw.threshold.clone(),
            threshold_type: raw.threshold_type,
            period: match raw.period {
                PeriodSpec::Explicit(p) => Some(p),
                PeriodSpec::Inherit => Some(billing),
                PeriodSpec::Absent => None,
            },
        })
        .collect();
    let cost: Option<LimitCost> = c.limits.iter().find_map(|l| l.cost.clone());
    Limitation::new(op.clone(), c.metric, window, limits, cost).ok()
}
