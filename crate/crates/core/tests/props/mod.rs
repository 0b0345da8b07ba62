//! Strategies and property bodies shared by the property tests and the
//! acceptance run.
#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use sla4oai_core::analysis::{aggregate_bpu, compute_bpu, validity, Bpu, CapacityTable, Criterion, PriorityPolicy, Subject};
use sla4oai_core::model::{
    ApiOperation, Capacity, Cost, HttpMethod, Limitation, Metric, MetricRelationship, Period, Plan, Pricing,
    Provenance, Threshold, ThresholdLimit, TimeUnit, WindowKind,
};
use sla4oai_core::rational::{int, ratio};
use sla4oai_core::simulator::{burst_utilization, realize_extreme_traces, steady_utilization};
use sla4oai_core::sla4oai::{lower_to_model, parse_document, resolve_globs, Diagnostic, Format, OperationSet};

pub const CASES: u32 = 256;

pub fn config() -> ProptestConfig {
    ProptestConfig::with_cases(CASES)
}

fn unit() -> impl Strategy<Value = TimeUnit> {
    prop::sample::select(TimeUnit::ALL.to_vec())
}

pub fn period() -> impl Strategy<Value = Period> {
    (1u64..=3, unit()).prop_map(|(a, u)| Period::new(a, u).unwrap())
}

fn op(path: &str) -> ApiOperation {
    ApiOperation::new(path, HttpMethod::Get).unwrap()
}

fn monthly(amount: i64) -> Cost {
    Cost::fixed(int(amount), "USD", Period::one(TimeUnit::Month)).unwrap()
}

type LimitSpec = (i64, Period);

/// Two plans over two operations and two related metrics, with a declared
/// capacity on `/a` and derived ones elsewhere.
#[derive(Debug, Clone)]
pub struct Scenario {
    costs: Vec<i64>,
    limitations: BTreeMap<(usize, &'static str, &'static str, bool), Vec<LimitSpec>>,
    factor: (i64, i64),
    capacity_a: (i64, Period),
}

pub fn scenario() -> impl Strategy<Value = Scenario> {
    let key = (0usize..2, prop::sample::select(vec!["/a", "/b"]), prop::sample::select(vec!["requests", "KB"]), any::<bool>());
    let limit = (prop_oneof![9 => 0i64..300, 1 => -5i64..0], period());
    (
        prop::collection::vec(1i64..60, 2),
        prop::collection::btree_map(key, prop::collection::vec(limit, 1..4), 1..8),
        prop::sample::select(vec![(1, 2), (1, 1), (2, 1), (3, 4)]),
        (1i64..1000, period()),
    )
        .prop_map(|(costs, limitations, factor, capacity_a)| Scenario { costs, limitations, factor, capacity_a })
}

impl Scenario {
    fn pricing(&self, k: i64) -> Pricing {
        let plans = (0..2)
            .filter_map(|p| {
                let limitations: Vec<Limitation> = self
                    .limitations
                    .iter()
                    .filter(|((plan, ..), _)| *plan == p)
                    .map(|((_, path, metric, quota), limits)| {
                        let window = if *quota { WindowKind::Quota } else { WindowKind::Rate };
                        let limits =
                            limits.iter().map(|(t, per)| ThresholdLimit::new(Threshold::Value(int(t * k)), Some(*per))).collect();
                        Limitation::new(op(path), *metric, window, limits, None).unwrap()
                    })
                    .collect();
                (!limitations.is_empty()).then(|| Plan::new(format!("P{p}"), monthly(self.costs[p]), limitations).unwrap())
            })
            .collect();
        let metrics = vec![Metric::new("requests").unwrap(), Metric::new("KB").unwrap()];
        let relationship = MetricRelationship::new("requests", "KB", ratio(self.factor.0, self.factor.1)).unwrap();
        Pricing::new(plans, metrics, vec![relationship], "USD").unwrap()
    }

    fn capacities(&self, k: i64) -> CapacityTable {
        let (c, per) = self.capacity_a;
        CapacityTable::new().with("/a", HttpMethod::All, Capacity::new("requests", int(c * k), per, Provenance::Declared).unwrap())
    }

    fn findings(&self, k: i64) -> Vec<(Criterion, Vec<Subject>)> {
        let report = validity(&self.pricing(k), &self.capacities(k), &PriorityPolicy::default());
        report.conflicts().iter().map(|c| (c.criterion, c.subjects.clone())).collect()
    }
}

/// Multiplying every threshold and the capacity by `k` changes nothing.
pub fn scale_invariance(s: &Scenario, k: i64) -> Result<(), TestCaseError> {
    prop_assert_eq!(s.findings(1), s.findings(k));
    Ok(())
}

pub fn bpu() -> impl Strategy<Value = Bpu> {
    (0i64..500, 1i64..50, 0i64..500, 1i64..50).prop_map(|(a, b, c, d)| Bpu { min_pu: ratio(a, b), max_pu: ratio(c, d) })
}

/// Commutative, associative, idempotent, and never wider than an input.
pub fn aggregate_laws(a: &Bpu, b: &Bpu, c: &Bpu) -> Result<(), TestCaseError> {
    let agg = |xs: &[&Bpu]| aggregate_bpu(xs.iter().copied()).unwrap();
    prop_assert_eq!(agg(&[a, b]), agg(&[b, a]));
    let left = agg(&[&agg(&[a, b]), c]);
    prop_assert_eq!(&left, &agg(&[a, &agg(&[b, c])]));
    prop_assert_eq!(&left, &agg(&[a, b, c]));
    prop_assert_eq!(&agg(&[a]), a);
    prop_assert_eq!(&agg(&[a, a]), a);
    let ab = agg(&[a, b]);
    prop_assert!(ab.min_pu >= a.min_pu && ab.min_pu >= b.min_pu);
    prop_assert!(ab.max_pu <= a.max_pu && ab.max_pu <= b.max_pu);
    Ok(())
}

/// The burst trace hits `max_pu` and the uniform trace averages `min_pu`.
pub fn extreme_traces(t: i64, per: Period, c: i64, cap_per: Period) -> Result<(), TestCaseError> {
    let limit = ThresholdLimit::new(Threshold::Value(int(t)), Some(per));
    let capacity = Capacity::new("requests", int(c), cap_per, Provenance::Declared).unwrap();
    let bounds = compute_bpu(&limit, &capacity).unwrap();
    let (uniform, burst) = realize_extreme_traces(&limit, &capacity).unwrap();
    prop_assert_eq!(uniform.total_units(), t as u64);
    prop_assert_eq!(burst_utilization(&burst, &capacity), bounds.max_pu);
    prop_assert_eq!(steady_utilization(&uniform, per, &capacity), bounds.min_pu);
    Ok(())
}

pub type MonotoneCase = (Vec<(i64, Period, bool)>, Vec<i64>, i64);

pub fn monotone_case() -> impl Strategy<Value = MonotoneCase> {
    (prop::collection::vec((1i64..400, period(), any::<bool>()), 1..5), prop::collection::vec(0i64..100, 5), 1i64..500)
}

fn has_capacity_conflict(limits: &[(i64, Period, bool)], c: i64, scale: impl Fn(usize, i64) -> i64) -> bool {
    let mut by_window: BTreeMap<bool, Vec<ThresholdLimit>> = BTreeMap::new();
    for (i, (t, per, quota)) in limits.iter().enumerate() {
        by_window.entry(*quota).or_default().push(ThresholdLimit::new(Threshold::Value(int(scale(i, *t))), Some(*per)));
    }
    let limitations = by_window
        .into_iter()
        .map(|(quota, ls)| {
            let window = if quota { WindowKind::Quota } else { WindowKind::Rate };
            Limitation::new(op("/a"), "requests", window, ls, None).unwrap()
        })
        .collect();
    let plan = Plan::new("P", monthly(1), limitations).unwrap();
    let pricing = Pricing::new(vec![plan], vec![Metric::new("requests").unwrap()], vec![], "USD").unwrap();
    let cap = Capacity::new("requests", int(c), Period::one(TimeUnit::Second), Provenance::Declared).unwrap();
    let table = CapacityTable::new().with("/a", HttpMethod::Get, cap);
    validity(&pricing, &table, &PriorityPolicy::default()).criteria().contains(&Criterion::Vc2_4)
}

/// Lowering thresholds can remove a capacity conflict but never add one.
pub fn capacity_monotonicity((limits, cut, c): &MonotoneCase) -> Result<(), TestCaseError> {
    let before = has_capacity_conflict(limits, *c, |_, t| t);
    let after = has_capacity_conflict(limits, *c, |i, t| t * cut[i] / 100);
    prop_assert!(before || !after, "decreasing thresholds introduced a capacity conflict");
    Ok(())
}

const PATTERNS: [&str; 6] = ["/v3/*", "/v3/operation/*", "/*", "/api/*", "/v3/a", "/*/v3/*"];
const PATHS: [&str; 4] = ["/v3/a", "/v3/operation/x", "/api/v3/a", "/other"];

pub type Entry = (&'static str, &'static str, &'static str, i64);

/// A method key with its (metric, max) pairs.
type MethodEntries<'a> = (&'a str, Vec<(&'a str, i64)>);

fn glob_document(entries: &[Entry]) -> String {
    let mut grouped: Vec<(&str, Vec<MethodEntries>)> = Vec::new();
    for &(pattern, method, metric, max) in entries {
        let at = match grouped.iter().position(|(p, _)| *p == pattern) {
            Some(i) => i,
            None => {
                grouped.push((pattern, Vec::new()));
                grouped.len() - 1
            }
        };
        let methods = &mut grouped[at].1;
        match methods.iter_mut().find(|(m, _)| *m == method) {
            Some((_, metrics)) => metrics.push((metric, max)),
            None => methods.push((method, vec![(metric, max)])),
        }
    }
    let mut text = String::from(
        "context: {id: g, sla: '1.0', type: plans, api: ./oas.yaml}\nmetrics: {requests: {}, bytes: {}}\nplans:\n  P:\n    pricing: {cost: 1}\n    rates:\n",
    );
    for (pattern, methods) in grouped {
        text.push_str(&format!("      '{pattern}':\n"));
        for (method, metrics) in methods {
            text.push_str(&format!("        {method}:\n"));
            for (metric, max) in metrics {
                text.push_str(&format!("          {metric}: [{{max: {max}, period: {{amount: 1, unit: second}}}}]\n"));
            }
        }
    }
    text
}

/// The lowered pricing, or the sorted diagnostics.
fn resolve(entries: &[Entry]) -> Result<Pricing, Vec<String>> {
    let doc = parse_document(glob_document(entries).as_bytes(), Format::Yaml).unwrap().document;
    let operations = OperationSet {
        operations: PATHS.iter().flat_map(|p| [HttpMethod::Get, HttpMethod::Post].map(|m| ApiOperation::new(*p, m).unwrap())).collect(),
        linked: true,
    };
    let sorted = |ds: Vec<Diagnostic>| {
        let mut out: Vec<String> = ds.iter().map(|d| format!("{} {}", d.code, d.message)).collect();
        out.sort();
        out
    };
    let resolution = resolve_globs(&doc, &operations).map_err(sorted)?;
    lower_to_model(&doc, &resolution).map(|l| l.pricing).map_err(sorted)
}

/// Distinct (pattern, method, metric) entries in two independent orders.
pub fn glob_orders() -> impl Strategy<Value = (Vec<Entry>, Vec<Entry>)> {
    let key = (
        prop::sample::select(PATTERNS.to_vec()),
        prop::sample::select(vec!["get", "post", "all"]),
        prop::sample::select(vec!["requests", "bytes"]),
    );
    prop::collection::btree_map(key, 1i64..100, 1..10)
        .prop_map(|m| m.into_iter().map(|((p, me, mt), max)| (p, me, mt, max)).collect::<Vec<_>>())
        .prop_flat_map(|entries| (Just(entries.clone()).prop_shuffle(), Just(entries).prop_shuffle()))
}

pub fn glob_order_independence((a, b): &(Vec<Entry>, Vec<Entry>)) -> Result<(), TestCaseError> {
    prop_assert_eq!(resolve(a), resolve(b));
    Ok(())
}
