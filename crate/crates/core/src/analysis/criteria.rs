//! The validity criteria, from single limits (VC1) up to whole pricings (VC4).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::Signed;

use crate::model::{
    equivalent_limitations, ApiOperation, Capacity, CostKind, Limitation, MetricRelationship, Period, Plan, Pricing,
    Threshold, ThresholdLimit,
};
use crate::rational::{format_percent, is_integer, to_decimal_string, Rational};

use super::bpu::{aggregate_bpu, compute_bpu, Bpu};
use super::numeric_limits;
use super::policy::{LimitKey, PriorityPolicy};
use super::report::{
    CapacityUse, Conflict, ConflictReport, Criterion, Detail, Exclusion, LimitBpu, LimitFacts, Note, Subject,
};

/// Capacity per (plan, operation, metric).
pub type CapacityMap = BTreeMap<(String, ApiOperation, String), Capacity>;

/// Conflicts plus the side findings that explain what was skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Findings {
    pub conflicts: Vec<Conflict>,
    pub exclusions: Vec<Exclusion>,
    pub informational: Vec<Note>,
}

impl Findings {
    fn extend(&mut self, other: Findings) {
        self.conflicts.extend(other.conflicts);
        self.exclusions.extend(other.exclusions);
        self.informational.extend(other.informational);
    }

    fn exclude(&mut self, subject: Subject, reason: impl Into<String>) {
        self.exclusions.push(Exclusion { subject, reason: reason.into() });
    }
}

/// VC1.1: a numeric threshold must be a natural number.
pub fn check_vc1(limit: &ThresholdLimit, at: &Subject) -> Vec<Conflict> {
    match &limit.threshold {
        Threshold::Value(v) if v.is_negative() || !is_integer(v) => vec![Conflict::new(
            Criterion::Vc1_1,
            vec![at.clone()],
            format!("threshold {} is not a natural number", to_decimal_string(v)),
            Detail::InvalidThreshold { threshold: to_decimal_string(v) },
        )],
        _ => Vec::new(),
    }
}

/// A limit taking part in the pairwise checks.
struct Entry<'a> {
    limitation: &'a Limitation,
    index: usize,
    threshold: &'a Rational,
    period: Period,
    order: usize,
}

impl Entry<'_> {
    fn subject(&self, plan: &str) -> Subject {
        Subject::limit(plan, self.limitation, self.index)
    }

    fn key(&self) -> LimitKey<'_> {
        LimitKey {
            window: self.limitation.window(),
            metric: self.limitation.metric(),
            period_seconds: Some(self.period.seconds()),
            index: self.order,
        }
    }

    fn limit(&self) -> &ThresholdLimit {
        &self.limitation.limits()[self.index]
    }
}

fn entries<'a>(limitations: &[&'a Limitation]) -> Vec<Entry<'a>> {
    let mut out = Vec::new();
    for l in limitations {
        for (index, threshold, period) in numeric_limits(l) {
            out.push(Entry { limitation: l, index, threshold, period, order: out.len() });
        }
    }
    out
}

/// Subjects of a pair, the prevailing one first.
fn ordered_pair(plan: &str, a: &Entry, b: &Entry, policy: &PriorityPolicy) -> Vec<Subject> {
    match policy.compare(&a.key(), &b.key()) {
        Ordering::Greater => vec![b.subject(plan), a.subject(plan)],
        _ => vec![a.subject(plan), b.subject(plan)],
    }
}

fn max_pu(entry: &Entry, capacity: Option<&Capacity>) -> Option<String> {
    capacity.map(|c| format_percent(&(entry.threshold / c.threshold())))
}

fn facts(entry: &Entry, capacity: Option<&Capacity>) -> LimitFacts {
    LimitFacts {
        threshold: to_decimal_string(entry.threshold),
        period: entry.period.to_string(),
        max_pu: max_pu(entry, capacity),
    }
}

/// (shorter, longer) when the longer-period limit allows fewer units than the
/// shorter-period one, i.e. its maximum PU is lower.
fn inconsistent<'e, 'a>(a: &'e Entry<'a>, b: &'e Entry<'a>) -> Option<(&'e Entry<'a>, &'e Entry<'a>)> {
    let (short, long) = match a.period.seconds().cmp(&b.period.seconds()) {
        Ordering::Less => (a, b),
        Ordering::Greater => (b, a),
        Ordering::Equal => return None,
    };
    (long.threshold < short.threshold).then_some((short, long))
}

fn vc2_2(plan: &str, es: &[Entry], capacity: Option<&Capacity>, policy: &PriorityPolicy) -> Vec<Conflict> {
    let mut out = Vec::new();
    for (i, a) in es.iter().enumerate() {
        for b in &es[i + 1..] {
            if let Some((short, long)) = inconsistent(a, b) {
                out.push(Conflict::new(
                    Criterion::Vc2_2,
                    ordered_pair(plan, a, b, policy),
                    format!(
                        "{} allows fewer units than {}, so the shorter-period limit can never be reached",
                        long.limit(),
                        short.limit()
                    ),
                    Detail::PeriodInconsistency { shorter: facts(short, capacity), longer: facts(long, capacity) },
                ));
            }
        }
    }
    out
}

fn vc2_3(plan: &str, es: &[Entry], policy: &PriorityPolicy) -> Vec<Conflict> {
    let mut out = Vec::new();
    for (i, a) in es.iter().enumerate() {
        for b in &es[i + 1..] {
            if a.period.seconds() == b.period.seconds() && a.threshold != b.threshold {
                out.push(Conflict::new(
                    Criterion::Vc2_3,
                    ordered_pair(plan, a, b, policy),
                    format!("{} and {} use the same period with different thresholds", a.limit(), b.limit()),
                    Detail::Ambiguity {
                        period: a.period.to_string(),
                        thresholds: vec![to_decimal_string(a.threshold), to_decimal_string(b.threshold)],
                    },
                ));
            }
        }
    }
    out
}

/// Aggregated BPU of every numeric limit in `es` against `capacity`.
fn vc2_4(
    plan: &str,
    group: Subject,
    es: &[Entry],
    capacity: &Capacity,
    policy: &PriorityPolicy,
    findings: &mut Findings,
) {
    if es.is_empty() {
        return;
    }
    let bpus: Vec<Bpu> = es.iter().map(|e| compute_bpu(e.limit(), capacity).expect("numeric limits have a BPU")).collect();
    let aggregate = aggregate_bpu(&bpus).expect("non-empty");
    if aggregate.is_inverted() {
        findings.informational.push(Note {
            subjects: vec![group.clone()],
            message: format!(
                "aggregated utilization {aggregate} against {capacity} is inverted: the limits pull in opposite directions"
            ),
        });
    }
    if aggregate.max_pu > Rational::from_integer(1.into()) {
        let mut order: Vec<usize> = (0..es.len()).collect();
        order.sort_by(|&i, &j| policy.compare(&es[i].key(), &es[j].key()));
        findings.conflicts.push(Conflict::new(
            Criterion::Vc2_4,
            order.iter().map(|&i| es[i].subject(plan)).collect(),
            format!(
                "maximum utilization {} exceeds the capacity of {capacity}",
                format_percent(&aggregate.max_pu)
            ),
            Detail::CapacityExceeded {
                capacity: capacity.to_string(),
                provenance: capacity.provenance().as_str(),
                min_pu: format_percent(&aggregate.min_pu),
                max_pu: format_percent(&aggregate.max_pu),
                limits: order
                    .iter()
                    .map(|&i| LimitBpu {
                        limit: es[i].limit().to_string(),
                        min_pu: format_percent(&bpus[i].min_pu),
                        max_pu: format_percent(&bpus[i].max_pu),
                    })
                    .collect(),
            },
        ));
    }
}

/// VC2 on one limitation: its limits are valid (VC1), consistent across
/// periods (VC2.2), unambiguous (VC2.3) and within `capacity` (VC2.4).
pub fn check_vc2(plan: &str, limitation: &Limitation, capacity: Option<&Capacity>, policy: &PriorityPolicy) -> Vec<Conflict> {
    let mut findings = Findings::default();
    vc2_limitation(plan, limitation, capacity, policy, &mut findings);
    let es = entries(&[limitation]);
    if let Some(c) = capacity {
        vc2_4(plan, Subject::limitation(plan, limitation), &es, c, policy, &mut findings);
    }
    findings.conflicts
}

/// VC1, VC2.2 and VC2.3 on one limitation, with exclusion notes.
fn vc2_limitation(
    plan: &str,
    limitation: &Limitation,
    capacity: Option<&Capacity>,
    policy: &PriorityPolicy,
    findings: &mut Findings,
) {
    for (i, limit) in limitation.limits().iter().enumerate() {
        let at = Subject::limit(plan, limitation, i);
        let vc1 = check_vc1(limit, &at);
        if !vc1.is_empty() {
            findings.conflicts.extend(vc1);
            findings.exclude(at, "invalid threshold; skipped by the other checks");
            continue;
        }
        match (&limit.threshold, limit.period) {
            (Threshold::Custom, _) => findings.exclude(at, "custom threshold; skipped by every check"),
            (Threshold::Unlimited, _) => findings.exclude(at, "unlimited threshold; skipped by period and capacity checks"),
            (Threshold::Value(_), None) => findings.exclude(at, "no period; skipped by period and capacity checks"),
            _ => {}
        }
    }
    let es = entries(&[limitation]);
    findings.conflicts.extend(vc2_2(plan, &es, capacity, policy));
    findings.conflicts.extend(vc2_3(plan, &es, policy));
}

/// Largest amount of `b` one window of `a_period` can hold under a limit of
/// `b_threshold` per `b_period`. A window no longer than `b_period` can
/// receive the whole threshold in one burst; longer windows are scaled
/// assuming uniform consumption. The flag reports that assumption.
fn budget_within(b_threshold: &Rational, b_period: Period, a_period: Period) -> (Rational, bool) {
    if a_period.seconds() <= b_period.seconds() {
        (b_threshold.clone(), false)
    } else {
        (b_threshold * a_period.seconds() / b_period.seconds(), true)
    }
}

fn vc3_2(plan: &Plan, relationships: &[MetricRelationship], policy: &PriorityPolicy) -> Vec<Conflict> {
    let name = plan.name();
    let mut out = Vec::new();
    for rel in relationships {
        let on = |metric: &str| plan.limitations().iter().filter(move |l| l.metric() == metric).collect::<Vec<_>>();
        for la in on(rel.metric_a()) {
            for lb in on(rel.metric_b()).into_iter().filter(|lb| lb.operation() == la.operation()) {
                let pair = [la, lb];
                let es = entries(&pair);
                let (ea, eb): (Vec<&Entry>, Vec<&Entry>) = es.iter().partition(|e| std::ptr::eq(e.limitation, la));
                for a in &ea {
                    for b in &eb {
                        let (budget, assumed) = budget_within(b.threshold, b.period, a.period);
                        let ceiling = &budget / rel.factor();
                        if a.threshold > &ceiling {
                            out.push(Conflict::new(
                                Criterion::Vc3_2,
                                ordered_pair(name, a, b, policy),
                                format!(
                                    "{} {} cannot be reached: {} {} allow at most {} {} per {}",
                                    a.limit(),
                                    rel.metric_a(),
                                    b.limit(),
                                    rel.metric_b(),
                                    to_decimal_string(&ceiling),
                                    rel.metric_a(),
                                    a.period
                                ),
                                Detail::RelatedMetrics {
                                    metric: rel.metric_a().to_string(),
                                    related_metric: rel.metric_b().to_string(),
                                    factor: to_decimal_string(rel.factor()),
                                    threshold: to_decimal_string(a.threshold),
                                    related_threshold: to_decimal_string(b.threshold),
                                    ceiling: to_decimal_string(&ceiling),
                                    period: a.period.to_string(),
                                    uniform_assumption: assumed,
                                },
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

/// VC3 on one plan: VC2 on every limitation, capacity per (operation,
/// metric) across both window kinds, and related-metric consistency.
pub fn check_vc3(
    plan: &Plan,
    relationships: &[MetricRelationship],
    capacities: &CapacityMap,
    policy: &PriorityPolicy,
) -> Findings {
    let name = plan.name();
    let mut findings = Findings::default();
    let capacity_of = |l: &Limitation| capacities.get(&(name.to_string(), l.operation().clone(), l.metric().to_string()));

    for l in plan.limitations() {
        vc2_limitation(name, l, capacity_of(l), policy, &mut findings);
    }

    let mut groups: BTreeMap<(&ApiOperation, &str), Vec<&Limitation>> = BTreeMap::new();
    for l in plan.limitations() {
        groups.entry((l.operation(), l.metric())).or_default().push(l);
    }
    for ((op, metric), ls) in groups {
        let es = entries(&ls);
        // quota/rate pairs are reported, not counted as conflicts
        for (i, a) in es.iter().enumerate() {
            for b in es[i + 1..].iter().filter(|b| b.limitation.window() != a.limitation.window()) {
                if let Some((short, long)) = inconsistent(a, b) {
                    findings.informational.push(Note {
                        subjects: ordered_pair(name, a, b, policy),
                        message: format!(
                            "{} {} allows fewer units than {} {}; the shorter-period limit can never be reached",
                            long.limitation.window(),
                            long.limit(),
                            short.limitation.window(),
                            short.limit()
                        ),
                    });
                }
            }
        }
        if let Some(capacity) = capacities.get(&(name.to_string(), op.clone(), metric.to_string())) {
            vc2_4(name, Subject::group(name, op, metric), &es, capacity, policy, &mut findings);
        }
    }

    findings.conflicts.extend(vc3_2(plan, relationships, policy));
    findings
}

/// VC4: VC3 on every plan, then cost consistency between plan pairs.
pub fn check_vc4(pricing: &Pricing, capacities: &CapacityMap, policy: &PriorityPolicy) -> ConflictReport {
    let mut findings = Findings::default();
    for plan in pricing.plans() {
        findings.extend(check_vc3(plan, pricing.relationships(), capacities, policy));
    }

    let mut priced = Vec::new();
    for plan in pricing.plans() {
        let cost = plan.cost();
        if cost.overage().is_some() {
            findings.exclude(Subject::plan(plan.name()), "overage cost is not compared between plans");
        }
        if cost.operation_cost().is_some() {
            findings.exclude(Subject::plan(plan.name()), "operation cost is not compared between plans");
        }
        if plan.limitations().iter().any(|l| l.cost().is_some()) {
            findings.exclude(Subject::plan(plan.name()), "limit-level costs are not compared between plans");
        }
        match (cost.kind(), cost.per_second()) {
            (CostKind::Fixed(_), Some(rate)) => priced.push((plan, rate)),
            _ => findings.exclude(Subject::plan(plan.name()), "custom cost; skipped by the cost comparison"),
        }
    }
    for (i, (a, rate_a)) in priced.iter().enumerate() {
        for (b, rate_b) in &priced[i + 1..] {
            let ((cheap, cheap_rate), (pricey, pricey_rate)) = match rate_a.cmp(rate_b) {
                Ordering::Less => ((a, rate_a), (b, rate_b)),
                Ordering::Greater => ((b, rate_b), (a, rate_a)),
                Ordering::Equal => continue,
            };
            findings.conflicts.extend(vc4_pair(cheap, cheap_rate, pricey, pricey_rate, policy));
        }
    }

    let capacities = capacities.iter().map(|((plan, op, _), c)| CapacityUse::new(plan, op, c)).collect();
    ConflictReport::new(findings.conflicts, findings.exclusions, capacities, findings.informational)
}

fn vc4_pair(cheap: &Plan, cheap_rate: &Rational, pricey: &Plan, pricey_rate: &Rational, policy: &PriorityPolicy) -> Vec<Conflict> {
    let mut out = Vec::new();
    let cost_text = |plan: &Plan| {
        let c = plan.cost();
        format!("{} {} / {}", to_decimal_string(c.amount().expect("fixed")), c.currency(), c.period())
    };
    debug_assert!(cheap_rate < pricey_rate);
    for lc in cheap.limitations() {
        for lp in pricey.limitations().iter().filter(|lp| equivalent_limitations(lc, lp)) {
            let pair = [lc, lp];
            let es = entries(&pair);
            for c in es.iter().filter(|e| std::ptr::eq(e.limitation, lc)) {
                for p in es.iter().filter(|e| std::ptr::eq(e.limitation, lp)) {
                    if c.period.seconds() == p.period.seconds() && c.threshold > p.threshold {
                        let mut subjects = vec![c.subject(cheap.name()), p.subject(pricey.name())];
                        if policy.compare(&c.key(), &p.key()) == Ordering::Greater {
                            subjects.reverse();
                        }
                        out.push(Conflict::new(
                            Criterion::Vc4_2,
                            subjects,
                            format!(
                                "plan {} costs less than plan {} but allows {} against {} on {} {}",
                                cheap.name(),
                                pricey.name(),
                                c.limit(),
                                p.limit(),
                                lc.operation(),
                                lc.metric()
                            ),
                            Detail::CostInconsistency {
                                cheaper_plan: cheap.name().to_string(),
                                cheaper_cost: cost_text(cheap),
                                pricier_plan: pricey.name().to_string(),
                                pricier_cost: cost_text(pricey),
                                period: c.period.to_string(),
                                cheaper_threshold: to_decimal_string(c.threshold),
                                pricier_threshold: to_decimal_string(p.threshold),
                            },
                        ));
                    }
                }
            }
        }
    }
    out
}
