use std::fmt;
use std::str::FromStr;

use crate::rational::{int, Rational};

use super::cost::{OperationCost, OverageCost};
use super::time::{Period, TimeUnit};
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HttpMethod {
    Get,
    Put,
    Post,
    Delete,
    Options,
    Head,
    Patch,
    Trace,
    /// Wildcard method; only meaningful in SLA documents and unresolved operations.
    All,
}

impl HttpMethod {
    pub const CONCRETE: [HttpMethod; 8] = [
        HttpMethod::Get,
        HttpMethod::Put,
        HttpMethod::Post,
        HttpMethod::Delete,
        HttpMethod::Options,
        HttpMethod::Head,
        HttpMethod::Patch,
        HttpMethod::Trace,
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            HttpMethod::Get => "get",
            HttpMethod::Put => "put",
            HttpMethod::Post => "post",
            HttpMethod::Delete => "delete",
            HttpMethod::Options => "options",
            HttpMethod::Head => "head",
            HttpMethod::Patch => "patch",
            HttpMethod::Trace => "trace",
            HttpMethod::All => "all",
        }
    }

    pub fn is_all(self) -> bool {
        self == HttpMethod::All
    }
}

impl fmt::Display for HttpMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HttpMethod {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        HttpMethod::CONCRETE
            .into_iter()
            .chain([HttpMethod::All])
            .find(|m| m.as_str() == lower)
            .ok_or_else(|| ModelError::UnknownMethod(s.to_string()))
    }
}

/// An API operation: HTTP method plus path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApiOperation {
    path: String,
    method: HttpMethod,
}

impl ApiOperation {
    pub fn new(path: impl Into<String>, method: HttpMethod) -> Result<Self, ModelError> {
        let path = path.into();
        if !path.starts_with('/') && !path.contains('*') {
            return Err(ModelError::InvalidPath(path));
        }
        Ok(ApiOperation { path, method })
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn method(&self) -> HttpMethod {
        self.method
    }
}

impl fmt::Display for ApiOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.method.as_str().to_ascii_uppercase(), self.path)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ThresholdType {
    #[default]
    Max,
}

impl ThresholdType {
    pub const fn as_str(self) -> &'static str {
        match self {
            ThresholdType::Max => "MAX",
        }
    }
}

impl FromStr for ThresholdType {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "MAX" => Ok(ThresholdType::Max),
            _ => Err(ModelError::UnsupportedThresholdType(s.to_string())),
        }
    }
}

/// The value side of a limit. `Value` may hold any rational so that invalid
/// thresholds (negative, fractional) can reach the limit-level validity check.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Threshold {
    Value(Rational),
    Unlimited,
    /// Negotiated with the provider; the value is unknown.
    Custom,
}

impl Threshold {
    pub fn value(n: i64) -> Self {
        Threshold::Value(int(n))
    }

    pub fn as_value(&self) -> Option<&Rational> {
        match self {
            Threshold::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Value(v) => f.write_str(&crate::rational::to_decimal_string(v)),
            Threshold::Unlimited => f.write_str("unlimited"),
            Threshold::Custom => f.write_str("custom"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdLimit {
    pub threshold: Threshold,
    pub threshold_type: ThresholdType,
    /// `None` for limits that have no associated period.
    pub period: Option<Period>,
}

impl ThresholdLimit {
    pub fn new(threshold: Threshold, period: Option<Period>) -> Self {
        ThresholdLimit { threshold, threshold_type: ThresholdType::Max, period }
    }

    /// Numeric limit of `threshold` units per `amount` `unit`s.
    pub fn per(threshold: i64, amount: u64, unit: TimeUnit) -> Self {
        let period = Period::new(amount, unit).expect("period amount must be positive");
        ThresholdLimit::new(Threshold::value(threshold), Some(period))
    }

    pub fn numeric(&self) -> Option<(&Rational, Period)> {
        match (&self.threshold, self.period) {
            (Threshold::Value(v), Some(p)) => Some((v, p)),
            _ => None,
        }
    }
}

impl fmt::Display for ThresholdLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.period {
            Some(p) => write!(f, "{} / {}", self.threshold, p),
            None => write!(f, "{}", self.threshold),
        }
    }
}

/// Static (quota) or sliding (rate) accounting window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WindowKind {
    Quota,
    Rate,
}

impl WindowKind {
    pub const fn as_str(self) -> &'static str {
        match self {
            WindowKind::Quota => "quota",
            WindowKind::Rate => "rate",
        }
    }

    /// Name of the SLA4OAI section holding limits of this kind.
    pub const fn section(self) -> &'static str {
        match self {
            WindowKind::Quota => "quotas",
            WindowKind::Rate => "rates",
        }
    }

    pub const fn is_sliding(self) -> bool {
        matches!(self, WindowKind::Rate)
    }
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LimitCost {
    Overage(OverageCost),
    Operation(OperationCost),
}

/// A restriction on one metric of one operation, realized as threshold limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limitation {
    operation: ApiOperation,
    metric: String,
    window: WindowKind,
    limits: Vec<ThresholdLimit>,
    cost: Option<LimitCost>,
}

impl Limitation {
    pub fn new(
        operation: ApiOperation,
        metric: impl Into<String>,
        window: WindowKind,
        limits: Vec<ThresholdLimit>,
        cost: Option<LimitCost>,
    ) -> Result<Self, ModelError> {
        if limits.is_empty() {
            return Err(ModelError::EmptyLimitation);
        }
        Ok(Limitation { operation, metric: metric.into(), window, limits, cost })
    }

    pub fn operation(&self) -> &ApiOperation {
        &self.operation
    }

    pub fn metric(&self) -> &str {
        &self.metric
    }

    pub fn window(&self) -> WindowKind {
        self.window
    }

    pub fn limits(&self) -> &[ThresholdLimit] {
        &self.limits
    }

    pub fn cost(&self) -> Option<&LimitCost> {
        self.cost.as_ref()
    }

    /// Copy of this limitation with every limit replaced by `f(limit)`.
    pub fn map_limits(&self, f: impl FnMut(&ThresholdLimit) -> ThresholdLimit) -> Self {
        Limitation { limits: self.limits.iter().map(f).collect(), ..self.clone() }
    }
}

/// True iff both limitations restrict the same concrete operation, metric and window kind.
pub fn equivalent_limitations(a: &Limitation, b: &Limitation) -> bool {
    a.operation == b.operation && a.metric == b.metric && a.window == b.window
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Finite(Rational),
    Unbounded,
}

/// A limit restated on the capacity time grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedLimit {
    pub threshold: Bound,
    pub period_seconds: Rational,
    /// Period length measured in whole-or-fractional capacity units.
    pub period_in_units: Rational,
}

pub fn normalize_limit(limit: &ThresholdLimit, capacity_unit: TimeUnit) -> Result<NormalizedLimit, ModelError> {
    let period = limit.period.ok_or(ModelError::NormalizationUnsupported)?;
    let threshold = match &limit.threshold {
        Threshold::Value(v) => Bound::Finite(v.clone()),
        Threshold::Unlimited => Bound::Unbounded,
        Threshold::Custom => return Err(ModelError::CustomThreshold),
    };
    let period_seconds = period.seconds();
    let period_in_units = &period_seconds / int(capacity_unit.seconds() as i64);
    Ok(NormalizedLimit { threshold, period_seconds, period_in_units })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(path: &str, method: HttpMethod) -> ApiOperation {
        ApiOperation::new(path, method).unwrap()
    }

    #[test]
    fn normalizes_daily_and_weekly_limits() {
        let daily = normalize_limit(&ThresholdLimit::per(43_200, 1, TimeUnit::Day), TimeUnit::Second).unwrap();
        assert_eq!(daily.threshold, Bound::Finite(int(43_200)));
        assert_eq!(daily.period_seconds, int(86_400));

        let weekly = normalize_limit(&ThresholdLimit::per(100, 1, TimeUnit::Week), TimeUnit::Second).unwrap();
        assert_eq!(weekly.threshold, Bound::Finite(int(100)));
        assert_eq!(weekly.period_seconds, int(604_800));

        let zero = normalize_limit(&ThresholdLimit::per(0, 1, TimeUnit::Second), TimeUnit::Second).unwrap();
        assert_eq!(zero.threshold, Bound::Finite(int(0)));
        assert_eq!(zero.period_seconds, int(1));
    }

    #[test]
    fn period_in_capacity_units() {
        let n = normalize_limit(&ThresholdLimit::per(10, 1, TimeUnit::Hour), TimeUnit::Minute).unwrap();
        assert_eq!(n.period_in_units, int(60));
    }

    #[test]
    fn unlimited_and_periodless() {
        let unlimited = ThresholdLimit::new(Threshold::Unlimited, Some(Period::one(TimeUnit::Day)));
        assert_eq!(normalize_limit(&unlimited, TimeUnit::Second).unwrap().threshold, Bound::Unbounded);

        let periodless = ThresholdLimit::new(Threshold::value(5), None);
        assert_eq!(
            normalize_limit(&periodless, TimeUnit::Second),
            Err(ModelError::NormalizationUnsupported)
        );
        let custom = ThresholdLimit::new(Threshold::Custom, Some(Period::one(TimeUnit::Day)));
        assert_eq!(normalize_limit(&custom, TimeUnit::Second), Err(ModelError::CustomThreshold));
    }

    #[test]
    fn equivalence_examples() {
        let rate = |path: &str, metric: &str, window| {
            Limitation::new(op(path, HttpMethod::Get), metric, window, vec![ThresholdLimit::per(1, 1, TimeUnit::Second)], None)
                .unwrap()
        };
        let a = rate("/v3/x", "requests", WindowKind::Rate);
        assert!(equivalent_limitations(&a, &a.clone()));
        assert!(!equivalent_limitations(&rate("/v3/x", "requests", WindowKind::Quota), &a));

        let post = |path: &str| {
            Limitation::new(op(path, HttpMethod::Post), "matches", WindowKind::Quota, vec![ThresholdLimit::per(1, 1, TimeUnit::Day)], None)
                .unwrap()
        };
        assert!(!equivalent_limitations(&post("/a"), &post("/b")));
    }

    #[test]
    fn rejects_relative_paths_and_empty_limits() {
        assert!(ApiOperation::new("v3/x", HttpMethod::Get).is_err());
        assert!(ApiOperation::new("v3/*", HttpMethod::Get).is_ok());
        assert_eq!(
            Limitation::new(op("/x", HttpMethod::Get), "requests", WindowKind::Rate, vec![], None),
            Err(ModelError::EmptyLimitation)
        );
    }

    #[test]
    fn method_parsing() {
        assert_eq!("POST".parse::<HttpMethod>().unwrap(), HttpMethod::Post);
        assert_eq!("all".parse::<HttpMethod>().unwrap(), HttpMethod::All);
        assert!("fetch".parse::<HttpMethod>().is_err());
        assert!("MIN".parse::<ThresholdType>().is_err());
    }
}
