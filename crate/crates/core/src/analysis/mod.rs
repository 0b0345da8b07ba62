//! Validity analysis of a pricing: utilization bounds, capacities and the
//! hierarchical criteria VC1 to VC4.

mod bpu;
mod capacity;
mod criteria;
mod policy;
mod report;

pub use bpu::{aggregate_bpu, compute_bpu, Bpu, BpuError};
pub use capacity::{derive_default_capacity, CapacityTable, NoCapacityDerivable, SidecarError};
pub use criteria::{check_vc1, check_vc2, check_vc3, check_vc4, CapacityMap, Findings};
pub use policy::{LimitKey, PriorityPolicy, PriorityRule};
pub use report::{
    CapacityUse, Conflict, ConflictReport, Criterion, Detail, Exclusion, Explanation, LimitBpu, LimitFacts, Note,
    Subject, Verdict,
};

use num::Signed;

use crate::model::{CapacityScope, Limitation, Period, Pricing, Threshold};
use crate::rational::{is_integer, Rational};

/// Limits of `l` with a valid numeric threshold and a period, with their index.
pub(crate) fn numeric_limits(l: &Limitation) -> Vec<(usize, &Rational, Period)> {
    l.limits()
        .iter()
        .enumerate()
        .filter_map(|(i, limit)| match (&limit.threshold, limit.period) {
            (Threshold::Value(v), Some(p)) if !v.is_negative() && is_integer(v) => Some((i, v, p)),
            _ => None,
        })
        .collect()
}

/// Capacity for every (plan, operation, metric): declared when the table has
/// one, derived from that group's limits otherwise.
pub fn assign_capacities(pricing: &Pricing, declared: &CapacityTable) -> (CapacityMap, Vec<Exclusion>) {
    let mut map = CapacityMap::new();
    let mut exclusions = Vec::new();
    for plan in pricing.plans() {
        for l in plan.limitations() {
            let key = (plan.name().to_string(), l.operation().clone(), l.metric().to_string());
            if map.contains_key(&key) {
                continue;
            }
            let scope = CapacityScope { operation: l.operation().clone(), plan: plan.name().to_string() };
            let group: Vec<Limitation> = plan
                .limitations()
                .iter()
                .filter(|o| o.operation() == l.operation() && o.metric() == l.metric())
                .cloned()
                .collect();
            match declared.lookup(l.operation(), l.metric()) {
                Some(c) => {
                    map.insert(key, c.clone().with_scope(scope));
                }
                None => match derive_default_capacity(&group, l.metric()) {
                    Ok(c) => {
                        map.insert(key, c.with_scope(scope));
                    }
                    Err(e) => exclusions.push(Exclusion {
                        subject: Subject::group(plan.name(), l.operation(), l.metric()),
                        reason: format!("{e}; capacity check skipped"),
                    }),
                },
            }
        }
    }
    (map, exclusions)
}

/// Full analysis of a pricing.
pub fn validity(pricing: &Pricing, declared: &CapacityTable, policy: &PriorityPolicy) -> ConflictReport {
    let (capacities, mut exclusions) = assign_capacities(pricing, declared);
    let report = check_vc4(pricing, &capacities, policy);
    exclusions.extend(report.exclusions().iter().cloned());
    ConflictReport::new(
        report.conflicts().to_vec(),
        exclusions,
        report.capacities().to_vec(),
        report.informational().to_vec(),
    )
}
