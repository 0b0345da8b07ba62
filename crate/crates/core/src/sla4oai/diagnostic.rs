use std::fmt;

use serde::{Serialize, Serializer};

use super::value::Pointer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Stable machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    EmptyInput,
    InvalidUtf8,
    ParseError,
    InvalidRoot,
    UnknownKey,
    MissingContext,
    MissingField,
    InvalidType,
    InvalidContextType,
    InvalidUri,
    InvalidEnum,
    NoPlans,
    NonpositivePeriod,
    InvalidTimeUnit,
    InvalidMax,
    InvalidAmount,
    InvalidMethod,
    InvalidPath,
    UnsupportedThresholdType,
    RatePeriodInherited,
    DefaultBillingPeriod,
    MissingCost,
    MultipleLimitCosts,
    InvalidRelationship,
    UndeclaredMetric,
    DuplicatePattern,
    GlobTie,
    GlobUnresolved,
    NoMatch,
    UnknownPath,
    UnknownMethod,
    EmptyOasPaths,
    OasUnavailable,
    InvalidOas,
    InvalidModel,
    SlaUnavailable,
    InvalidCapacity,
}

impl Code {
    pub const fn as_str(self) -> &'static str {
        match self {
            Code::EmptyInput => "EMPTY_INPUT",
            Code::InvalidUtf8 => "INVALID_UTF8",
            Code::ParseError => "PARSE_ERROR",
            Code::InvalidRoot => "INVALID_ROOT",
            Code::UnknownKey => "UNKNOWN_KEY",
            Code::MissingContext => "MISSING_CONTEXT",
            Code::MissingField => "MISSING_FIELD",
            Code::InvalidType => "INVALID_TYPE",
            Code::InvalidContextType => "INVALID_CONTEXT_TYPE",
            Code::InvalidUri => "INVALID_URI",
            Code::InvalidEnum => "INVALID_ENUM",
            Code::NoPlans => "NO_PLANS",
            Code::NonpositivePeriod => "NONPOSITIVE_PERIOD",
            Code::InvalidTimeUnit => "INVALID_TIME_UNIT",
            Code::InvalidMax => "INVALID_MAX",
            Code::InvalidAmount => "INVALID_AMOUNT",
            Code::InvalidMethod => "INVALID_METHOD",
            Code::InvalidPath => "INVALID_PATH",
            Code::UnsupportedThresholdType => "UNSUPPORTED_THRESHOLD_TYPE",
            Code::RatePeriodInherited => "RATE_PERIOD_INHERITED",
            Code::DefaultBillingPeriod => "DEFAULT_BILLING_PERIOD",
            Code::MissingCost => "MISSING_COST",
            Code::MultipleLimitCosts => "MULTIPLE_LIMIT_COSTS",
            Code::InvalidRelationship => "INVALID_RELATIONSHIP",
            Code::UndeclaredMetric => "UNDECLARED_METRIC",
            Code::DuplicatePattern => "DUPLICATE_PATTERN",
            Code::GlobTie => "GLOB_TIE",
            Code::GlobUnresolved => "GLOB_UNRESOLVED",
            Code::NoMatch => "NO_MATCH",
            Code::UnknownPath => "UNKNOWN_PATH",
            Code::UnknownMethod => "UNKNOWN_METHOD",
            Code::EmptyOasPaths => "EMPTY_OAS_PATHS",
            Code::OasUnavailable => "OAS_UNAVAILABLE",
            Code::InvalidOas => "INVALID_OAS",
            Code::InvalidModel => "INVALID_MODEL",
            Code::SlaUnavailable => "SLA_UNAVAILABLE",
            Code::InvalidCapacity => "INVALID_CAPACITY",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// A located finding about a source document. `location` is a JSON pointer
/// into the document (`""` for the document root).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: Code, location: &Pointer, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, code, location: location.to_string(), message: message.into() }
    }

    pub fn warning(code: Code, location: &Pointer, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, code, location: location.to_string(), message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    pub fn downgraded(mut self) -> Self {
        self.severity = Severity::Warning;
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let location = if self.location.is_empty() { "/" } else { &self.location };
        write!(f, "{severity}[{}] at {location}: {}", self.code, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
