use num::Signed;

use crate::rational::Rational;

use super::time::Period;
use super::ModelError;

/// Charge per `overage_unit` metric units consumed beyond a quota.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OverageCost {
    pub overage_unit: u64,
    pub unit_cost: Rational,
}

impl OverageCost {
    pub fn new(overage_unit: u64, unit_cost: Rational) -> Result<Self, ModelError> {
        if overage_unit == 0 {
            return Err(ModelError::NonPositiveVolume);
        }
        if unit_cost.is_negative() {
            return Err(ModelError::NegativeAmount);
        }
        Ok(OverageCost { overage_unit, unit_cost })
    }
}

/// Charge per pack of `volume` invocations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperationCost {
    pub volume: u64,
    pub unit_cost: Rational,
}

impl OperationCost {
    pub fn new(volume: u64, unit_cost: Rational) -> Result<Self, ModelError> {
        if volume == 0 {
            return Err(ModelError::NonPositiveVolume);
        }
        if unit_cost.is_negative() {
            return Err(ModelError::NegativeAmount);
        }
        Ok(OperationCost { volume, unit_cost })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CostKind {
    Fixed(Rational),
    /// Unknown price, negotiated with the provider.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cost {
    kind: CostKind,
    currency: String,
    period: Period,
    overage: Option<OverageCost>,
    operation_cost: Option<OperationCost>,
}

impl Cost {
    pub fn fixed(amount: Rational, currency: impl Into<String>, period: Period) -> Result<Self, ModelError> {
        if amount.is_negative() {
            return Err(ModelError::NegativeAmount);
        }
        Ok(Cost {
            kind: CostKind::Fixed(amount),
            currency: currency.into(),
            period,
            overage: None,
            operation_cost: None,
        })
    }

    pub fn custom(currency: impl Into<String>, period: Period) -> Self {
        Cost { kind: CostKind::Custom, currency: currency.into(), period, overage: None, operation_cost: None }
    }

    pub fn with_overage(mut self, overage: OverageCost) -> Self {
        self.overage = Some(overage);
        self
    }

    pub fn with_operation_cost(mut self, operation_cost: OperationCost) -> Self {
        self.operation_cost = Some(operation_cost);
        self
    }

    pub fn kind(&self) -> &CostKind {
        &self.kind
    }

    pub fn amount(&self) -> Option<&Rational> {
        match &self.kind {
            CostKind::Fixed(a) => Some(a),
            CostKind::Custom => None,
        }
    }

    pub fn currency(&self) -> &str {
        &self.currency
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn overage(&self) -> Option<&OverageCost> {
        self.overage.as_ref()
    }

    pub fn operation_cost(&self) -> Option<&OperationCost> {
        self.operation_cost.as_ref()
    }

    /// Fixed amount per second of billing period; `None` for custom costs.
    pub fn per_second(&self) -> Option<Rational> {
        self.amount().map(|a| a / self.period.seconds())
    }
}
