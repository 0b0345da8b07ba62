//! In-memory pricing model: pricings, plans, costs, limitations, limits and
//! capacities. Values are immutable once built; constructors enforce the
//! structural invariants.

mod capacity;
mod cost;
mod limit;
mod pricing;
mod time;

pub use capacity::{Capacity, CapacityScope, Provenance, PuRange};
pub use cost::{Cost, CostKind, OperationCost, OverageCost};
pub use limit::{
    equivalent_limitations, normalize_limit, ApiOperation, Bound, HttpMethod, LimitCost, Limitation, NormalizedLimit,
    Threshold, ThresholdLimit, ThresholdType, WindowKind,
};
pub use pricing::{Metric, MetricRelationship, MetricType, Plan, Pricing, Resolution};
pub use time::{Period, TimeUnit};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("period amount must be a positive integer")]
    NonPositivePeriod,
    #[error("unknown time unit `{0}`")]
    UnknownTimeUnit(String),
    #[error("unknown HTTP method `{0}`")]
    UnknownMethod(String),
    #[error("unsupported threshold type `{0}` (only MAX is supported)")]
    UnsupportedThresholdType(String),
    #[error("path `{0}` must start with '/' or contain a '*' wildcard")]
    InvalidPath(String),
    #[error("a limitation needs at least one limit")]
    EmptyLimitation,
    #[error("limit has no period; it cannot be normalized")]
    NormalizationUnsupported,
    #[error("limit has a custom threshold; it cannot be normalized")]
    CustomThreshold,
    #[error("monetary amounts must be non-negative")]
    NegativeAmount,
    #[error("volume must be a positive integer")]
    NonPositiveVolume,
    #[error("metric name must be non-empty")]
    EmptyMetricName,
    #[error("relationship factor must be positive")]
    NonPositiveFactor,
    #[error("metric `{0}` cannot be related to itself")]
    SelfRelationship(String),
    #[error("plan `{plan}` has two {window} limitations on {metric} for {operation}")]
    DuplicateLimitation { plan: String, operation: String, metric: String, window: WindowKind },
    #[error("duplicate plan `{0}`")]
    DuplicatePlan(String),
    #[error("metric `{0}` is not declared")]
    UndeclaredMetric(String),
    #[error("capacity threshold must be positive")]
    NonPositiveCapacity,
    #[error("utilization bounds must be non-negative")]
    NegativeUtilization,
    #[error("minimum utilization exceeds maximum utilization")]
    InvertedPuRange,
}
