use std::fmt;

use num::{Signed, Zero};

use crate::rational::{format_percent, Rational};

use super::limit::{ApiOperation, ThresholdType};
use super::time::Period;
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Declared,
    DerivedDefault,
}

impl Provenance {
    pub const fn as_str(self) -> &'static str {
        match self {
            Provenance::Declared => "declared",
            Provenance::DerivedDefault => "derived-default",
        }
    }
}

/// Where a capacity applies: one operation within one plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityScope {
    pub operation: ApiOperation,
    pub plan: String,
}

/// Maximum metric units per period the platform sustains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capacity {
    metric: String,
    threshold: Rational,
    threshold_type: ThresholdType,
    period: Period,
    scope: Option<CapacityScope>,
    provenance: Provenance,
}

impl Capacity {
    pub fn new(
        metric: impl Into<String>,
        threshold: Rational,
        period: Period,
        provenance: Provenance,
    ) -> Result<Self, ModelError> {
        if threshold.is_negative() || threshold.is_zero() {
            return Err(ModelError::NonPositiveCapacity);
        }
        Ok(Capacity {
            metric: metric.into(),
            threshold,
            threshold_type: ThresholdType::Max,
            period,
            scope: None,
            provenance,
        })
    }

    pub fn with_scope(mut self, scope: CapacityScope) -> Self {
        self.scope = Some(scope);
        self
    }

    pub fn metric(&self) -> &str {
        &self.metric
    }

    pub fn threshold(&self) -> &Rational {
        &self.threshold
    }

    pub fn threshold_type(&self) -> ThresholdType {
        self.threshold_type
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn scope(&self) -> Option<&CapacityScope> {
        self.scope.as_ref()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self, ModelError> {
        let mut c = Capacity::new(self.metric.clone(), &self.threshold * factor, self.period, self.provenance)?;
        c.scope = self.scope.clone();
        Ok(c)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} / {}",
            crate::rational::to_decimal_string(&self.threshold),
            self.metric,
            self.period
        )
    }
}

/// Closed interval of utilization fractions (1 = 100% of capacity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuRange {
    min_pu: Rational,
    max_pu: Rational,
}

impl PuRange {
    pub fn new(min_pu: Rational, max_pu: Rational) -> Result<Self, ModelError> {
        if min_pu.is_negative() || max_pu.is_negative() {
            return Err(ModelError::NegativeUtilization);
        }
        if min_pu > max_pu {
            return Err(ModelError::InvertedPuRange);
        }
        Ok(PuRange { min_pu, max_pu })
    }

    pub fn min_pu(&self) -> &Rational {
        &self.min_pu
    }

    pub fn max_pu(&self) -> &Rational {
        &self.max_pu
    }
}

impl fmt::Display for PuRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_percent(&self.min_pu), format_percent(&self.max_pu))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TimeUnit;
    use crate::rational::{int, ratio};

    #[test]
    fn pu_range_rejects_inversion() {
        assert_eq!(PuRange::new(int(1), ratio(1, 2)), Err(ModelError::InvertedPuRange));
        assert_eq!(PuRange::new(int(-1), int(1)), Err(ModelError::NegativeUtilization));
        let r = PuRange::new(ratio(1, 100_000), ratio(108, 125)).unwrap();
        assert_eq!(r.to_string(), "[0.001%, 86.4%]");
    }

    #[test]
    fn capacity_must_be_positive() {
        let sec = Period::one(TimeUnit::Second);
        assert_eq!(
            Capacity::new("requests", int(0), sec, Provenance::Declared),
            Err(ModelError::NonPositiveCapacity)
        );
        let c = Capacity::new("requests", int(100), sec, Provenance::Declared).unwrap();
        assert_eq!(c.to_string(), "100 requests / 1 second");
    }
}
