use std::fmt;

use thiserror::Error;

use crate::model::{Capacity, ModelError, PuRange, Threshold, ThresholdLimit};
use crate::rational::{format_percent, Rational};

/// Bounded utilization of a capacity: `[min_pu, max_pu]` as fractions.
/// Unlike `PuRange` an inverted pair is representable, since aggregating
/// limits can produce one and that inversion is itself a finding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bpu {
    pub min_pu: Rational,
    pub max_pu: Rational,
}

impl Bpu {
    pub fn is_inverted(&self) -> bool {
        self.min_pu > self.max_pu
    }

    pub fn to_range(&self) -> Result<PuRange, ModelError> {
        PuRange::new(self.min_pu.clone(), self.max_pu.clone())
    }
}

impl fmt::Display for Bpu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_percent(&self.min_pu), format_percent(&self.max_pu))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BpuError {
    #[error("limit is unlimited; its utilization is unbounded")]
    Unbounded,
    #[error("limit has a custom threshold")]
    Custom,
    #[error("limit has no period")]
    NoPeriod,
    #[error("cannot aggregate an empty set of ranges")]
    Empty,
}

/// Uniform consumption gives `min_pu`: the threshold spread over the period,
/// measured per capacity period. A single burst gives `max_pu`: the whole
/// threshold inside one capacity period.
pub fn compute_bpu(limit: &ThresholdLimit, capacity: &Capacity) -> Result<Bpu, BpuError> {
    let threshold = match &limit.threshold {
        Threshold::Value(v) => v,
        Threshold::Unlimited => return Err(BpuError::Unbounded),
        Threshold::Custom => return Err(BpuError::Custom),
    };
    let period = limit.period.ok_or(BpuError::NoPeriod)?;
    let periods_per_capacity_period = period.seconds() / capacity.period().seconds();
    let min_pu = threshold / periods_per_capacity_period / capacity.threshold();
    let max_pu = threshold / capacity.threshold();
    Ok(Bpu { min_pu, max_pu })
}

/// Highest minimum and lowest maximum over all ranges.
pub fn aggregate_bpu<'a>(ranges: impl IntoIterator<Item = &'a Bpu>) -> Result<Bpu, BpuError> {
    let mut iter = ranges.into_iter();
    let first = iter.next().ok_or(BpuError::Empty)?.clone();
    Ok(iter.fold(first, |acc, r| Bpu {
        min_pu: acc.min_pu.max(r.min_pu.clone()),
        max_pu: acc.max_pu.min(r.max_pu.clone()),
    }))
}
