//! Discrete-event traces checked against static (quota) and sliding (rate)
//! windows. Used as an executable oracle for the utilization bounds.

use std::io::Read;

use num::{BigInt, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::model::{Capacity, Period, Threshold, ThresholdLimit, WindowKind};
use crate::rational::{int, parse_decimal, to_decimal_string, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("event {index} at {timestamp} s comes before the previous event")]
    OutOfOrder { index: usize, timestamp: String },
    #[error("event {index} has a negative timestamp")]
    NegativeTimestamp { index: usize },
    #[error("event {index} must consume at least one unit")]
    ZeroUnits { index: usize },
    #[error("trace CSV line {line}: {message}")]
    Csv { line: u64, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("a custom threshold cannot be enforced")]
    CustomThreshold,
    #[error("a limit without a period cannot be enforced")]
    NoPeriod,
    #[error("threshold {0} is not a natural number")]
    InvalidThreshold(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowSemantics {
    /// Units in `(at - w, at]`.
    Sliding,
    /// Units in the fixed window `[anchor + k*w, anchor + (k+1)*w)` holding `at`.
    Static,
}

impl From<WindowKind> for WindowSemantics {
    fn from(kind: WindowKind) -> Self {
        match kind {
            WindowKind::Rate => WindowSemantics::Sliding,
            WindowKind::Quota => WindowSemantics::Static,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    /// Seconds since the trace origin.
    pub timestamp: Rational,
    pub units: u64,
    pub metric: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConsumptionTrace {
    events: Vec<Event>,
}

impl ConsumptionTrace {
    pub fn new(events: Vec<Event>) -> Result<Self, TraceError> {
        for (index, e) in events.iter().enumerate() {
            if e.timestamp.is_negative() {
                return Err(TraceError::NegativeTimestamp { index });
            }
            if e.units == 0 {
                return Err(TraceError::ZeroUnits { index });
            }
            if index > 0 && e.timestamp < events[index - 1].timestamp {
                return Err(TraceError::OutOfOrder { index, timestamp: to_decimal_string(&e.timestamp) });
            }
        }
        Ok(ConsumptionTrace { events })
    }

    /// Single-unit events of one metric at the given instants.
    pub fn requests(metric: &str, timestamps: impl IntoIterator<Item = Rational>) -> Result<Self, TraceError> {
        Self::new(timestamps.into_iter().map(|t| Event { timestamp: t, units: 1, metric: metric.to_string() }).collect())
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn total_units(&self) -> u64 {
        self.events.iter().map(|e| e.units).sum()
    }

    /// The events of one metric.
    pub fn for_metric(&self, metric: &str) -> Self {
        ConsumptionTrace { events: self.events.iter().filter(|e| e.metric == metric).cloned().collect() }
    }

    /// Reads `timestamp,units,metric` rows; a header row is expected.
    pub fn from_csv(reader: impl Read) -> Result<Self, TraceError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut events = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| TraceError::Csv {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                message: e.to_string(),
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let bad = |message: &str| TraceError::Csv { line, message: message.to_string() };
            if record.len() != 3 {
                return Err(bad("expected timestamp,units,metric"));
            }
            let timestamp = parse_decimal(&record[0]).ok_or_else(|| bad("timestamp must be a number"))?;
            let units = record[1].parse::<u64>().map_err(|_| bad("units must be a positive integer"))?;
            events.push(Event { timestamp, units, metric: record[2].to_string() });
        }
        Self::new(events)
    }
}

fn static_index(t: &Rational, window: &Rational, anchor: &Rational) -> BigInt {
    ((t - anchor) / window).floor().to_integer()
}

fn in_window(t: &Rational, at: &Rational, window: &Rational, kind: WindowSemantics, anchor: &Rational) -> bool {
    match kind {
        WindowSemantics::Sliding => t > &(at - window) && t <= at,
        WindowSemantics::Static => static_index(t, window, anchor) == static_index(at, window, anchor),
    }
}

/// Units inside the window of length `window` observed at `at`. Static
/// windows are anchored at t = 0.
pub fn count_window(trace: &ConsumptionTrace, at: &Rational, window: Period, kind: WindowSemantics) -> u64 {
    count_window_anchored(trace, at, window, kind, &Rational::zero())
}

pub fn count_window_anchored(
    trace: &ConsumptionTrace,
    at: &Rational,
    window: Period,
    kind: WindowSemantics,
    anchor: &Rational,
) -> u64 {
    let w = window.seconds();
    trace.events.iter().filter(|e| in_window(&e.timestamp, at, &w, kind, anchor)).map(|e| e.units).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub index: usize,
    /// Units already admitted in the event's window when it arrived.
    pub occupancy: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnforcementResult {
    pub admitted: usize,
    pub admitted_units: u64,
    pub rejected: Vec<Rejection>,
}

impl EnforcementResult {
    pub fn all_admitted(&self) -> bool {
        self.rejected.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

/// Admits events greedily in time order while the window stays within the
/// threshold. Static windows are anchored at t = 0.
pub fn enforce(
    trace: &ConsumptionTrace,
    limit: &ThresholdLimit,
    kind: WindowSemantics,
) -> Result<EnforcementResult, SimulationError> {
    enforce_anchored(trace, limit, kind, &Rational::zero())
}

pub fn enforce_anchored(
    trace: &ConsumptionTrace,
    limit: &ThresholdLimit,
    kind: WindowSemantics,
    anchor: &Rational,
) -> Result<EnforcementResult, SimulationError> {
    let threshold = match &limit.threshold {
        Threshold::Unlimited => {
            return Ok(EnforcementResult { admitted: trace.len(), admitted_units: trace.total_units(), rejected: vec![] })
        }
        Threshold::Custom => return Err(SimulationError::CustomThreshold),
        Threshold::Value(v) => natural(v)?,
    };
    let window = limit.period.ok_or(SimulationError::NoPeriod)?.seconds();
    let mut admitted: Vec<&Event> = Vec::new();
    let mut rejected = Vec::new();
    for (index, event) in trace.events.iter().enumerate() {
        let occupancy: u64 = admitted
            .iter()
            .filter(|a| in_window(&a.timestamp, &event.timestamp, &window, kind, anchor))
            .map(|a| a.units)
            .sum();
        if occupancy + event.units <= threshold {
            admitted.push(event);
        } else {
            rejected.push(Rejection { index, occupancy });
        }
    }
    Ok(EnforcementResult {
        admitted: admitted.len(),
        admitted_units: admitted.iter().map(|e| e.units).sum(),
        rejected,
    })
}

fn natural(v: &Rational) -> Result<u64, SimulationError> {
    if v.is_integer() {
        if let Some(n) = v.to_integer().to_u64() {
            return Ok(n);
        }
    }
    Err(SimulationError::InvalidThreshold(to_decimal_string(v)))
}

/// The two extreme ways to use a limit: `threshold` single-unit events spread
/// evenly over the period (uniform), and all units at t = 0 (burst).
pub fn realize_extreme_traces(
    limit: &ThresholdLimit,
    capacity: &Capacity,
) -> Result<(ConsumptionTrace, ConsumptionTrace), SimulationError> {
    let threshold = match &limit.threshold {
        Threshold::Value(v) => natural(v)?,
        Threshold::Unlimited => return Err(SimulationError::InvalidThreshold("unlimited".into())),
        Threshold::Custom => return Err(SimulationError::CustomThreshold),
    };
    let period = limit.period.ok_or(SimulationError::NoPeriod)?.seconds();
    let metric = capacity.metric().to_string();
    let step = &period / int(threshold.max(1) as i64);
    let uniform = (0..threshold)
        .map(|i| Event { timestamp: &step * int(i as i64), units: 1, metric: metric.clone() })
        .collect();
    let burst = if threshold == 0 {
        Vec::new()
    } else {
        vec![Event { timestamp: Rational::zero(), units: threshold, metric }]
    };
    Ok((ConsumptionTrace { events: uniform }, ConsumptionTrace { events: burst }))
}

/// Largest share of capacity used in any capacity-period slice anchored at 0.
pub fn burst_utilization(trace: &ConsumptionTrace, capacity: &Capacity) -> Rational {
    let slice = capacity.period().seconds();
    let mut per_slice: std::collections::BTreeMap<BigInt, u64> = Default::default();
    for e in &trace.events {
        *per_slice.entry(static_index(&e.timestamp, &slice, &Rational::zero())).or_default() += e.units;
    }
    let peak = per_slice.values().copied().max().unwrap_or(0);
    int(peak as i64) / capacity.threshold()
}

/// Average share of capacity per capacity period over `[0, horizon)`.
pub fn steady_utilization(trace: &ConsumptionTrace, horizon: Period, capacity: &Capacity) -> Rational {
    let end = horizon.seconds();
    let units: u64 = trace.events.iter().filter(|e| e.timestamp < end).map(|e| e.units).sum();
    let slices = end / capacity.period().seconds();
    int(units as i64) / slices / capacity.threshold()
}
