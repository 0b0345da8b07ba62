use std::fmt;
use std::str::FromStr;

use crate::rational::{int, Rational};

use super::ModelError;

/// Calendar-free time units. Months are 30 days and years 365 days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TimeUnit {
    Second,
    Minute,
    Hour,
    Day,
    Week,
    Month,
    Year,
}

impl TimeUnit {
    pub const ALL: [TimeUnit; 7] = [
        TimeUnit::Second,
        TimeUnit::Minute,
        TimeUnit::Hour,
        TimeUnit::Day,
        TimeUnit::Week,
        TimeUnit::Month,
        TimeUnit::Year,
    ];

    pub const fn seconds(self) -> u64 {
        match self {
            TimeUnit::Second => 1,
            TimeUnit::Minute => 60,
            TimeUnit::Hour => 3_600,
            TimeUnit::Day => 86_400,
            TimeUnit::Week => 604_800,
            TimeUnit::Month => 2_592_000,
            TimeUnit::Year => 31_536_000,
        }
    }

    pub const fn as_str(self) -> &'static str {
        match self {
            TimeUnit::Second => "second",
            TimeUnit::Minute => "minute",
            TimeUnit::Hour => "hour",
            TimeUnit::Day => "day",
            TimeUnit::Week => "week",
            TimeUnit::Month => "month",
            TimeUnit::Year => "year",
        }
    }
}

impl fmt::Display for TimeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TimeUnit {
    type Err = ModelError;

    /// Accepts singular, plural and upper-case spellings (`month`, `months`, `MONTH`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let singular = lower.strip_suffix('s').unwrap_or(&lower);
        TimeUnit::ALL
            .into_iter()
            .find(|u| u.as_str() == singular)
            .ok_or_else(|| ModelError::UnknownTimeUnit(s.to_string()))
    }
}

/// An amount of time units, e.g. `1 month`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Period {
    amount: u64,
    unit: TimeUnit,
}

impl Period {
    pub fn new(amount: u64, unit: TimeUnit) -> Result<Self, ModelError> {
        if amount == 0 {
            return Err(ModelError::NonPositivePeriod);
        }
        Ok(Period { amount, unit })
    }

    /// `1 <unit>`.
    pub const fn one(unit: TimeUnit) -> Self {
        Period { amount: 1, unit }
    }

    pub fn amount(&self) -> u64 {
        self.amount
    }

    pub fn unit(&self) -> TimeUnit {
        self.unit
    }

    pub fn seconds(&self) -> Rational {
        int(self.amount as i64) * int(self.unit.seconds() as i64)
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.amount == 1 {
            write!(f, "1 {}", self.unit)
        } else {
            write!(f, "{} {}s", self.amount, self.unit)
        }
    }
}
