use std::fmt;

use serde::{Serialize, Serializer};

use crate::model::{ApiOperation, Capacity, Limitation};
use crate::rational::to_decimal_string;
use crate::sla4oai::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    Vc1_1,
    Vc2_2,
    Vc2_3,
    Vc2_4,
    Vc3_2,
    Vc4_2,
}

impl Criterion {
    pub const fn code(self) -> &'static str {
        match self {
            Criterion::Vc1_1 => "VC1_1",
            Criterion::Vc2_2 => "VC2_2",
            Criterion::Vc2_3 => "VC2_3",
            Criterion::Vc2_4 => "VC2_4",
            Criterion::Vc3_2 => "VC3_2",
            Criterion::Vc4_2 => "VC4_2",
        }
    }

    pub const fn title(self) -> &'static str {
        match self {
            Criterion::Vc1_1 => "invalid threshold",
            Criterion::Vc2_2 => "limit consistency",
            Criterion::Vc2_3 => "limit ambiguity",
            Criterion::Vc2_4 => "capacity exceeded",
            Criterion::Vc3_2 => "related metrics",
            Criterion::Vc4_2 => "cost consistency",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code().replacen('_', ".", 1))
    }
}

impl Serialize for Criterion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

/// A location in the pricing model: a plan, optionally narrowed to a
/// limitation and one of its limits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Subject {
    pub plan: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
}

impl Subject {
    pub fn plan(plan: &str) -> Self {
        Subject { plan: plan.to_string(), window: None, operation: None, metric: None, limit: None }
    }

    pub fn limitation(plan: &str, l: &Limitation) -> Self {
        Subject {
            window: Some(l.window().as_str()),
            operation: Some(l.operation().to_string()),
            metric: Some(l.metric().to_string()),
            ..Subject::plan(plan)
        }
    }

    pub fn limit(plan: &str, l: &Limitation, index: usize) -> Self {
        Subject { limit: Some(index), ..Subject::limitation(plan, l) }
    }

    pub fn group(plan: &str, operation: &ApiOperation, metric: &str) -> Self {
        Subject { operation: Some(operation.to_string()), metric: Some(metric.to_string()), ..Subject::plan(plan) }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "plan {}", self.plan)?;
        if let Some(w) = self.window {
            write!(f, " > {w}")?;
        }
        if let Some(op) = &self.operation {
            write!(f, " > {op}")?;
        }
        if let Some(m) = &self.metric {
            write!(f, " > {m}")?;
        }
        if let Some(i) = self.limit {
            write!(f, " > limit #{i}")?;
        }
        Ok(())
    }
}

/// A limit as shown in explanations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitFacts {
    pub threshold: String,
    pub period: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_pu: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitBpu {
    pub limit: String,
    pub min_pu: String,
    pub max_pu: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Detail {
    InvalidThreshold {
        threshold: String,
    },
    PeriodInconsistency {
        shorter: LimitFacts,
        longer: LimitFacts,
    },
    Ambiguity {
        period: String,
        thresholds: Vec<String>,
    },
    CapacityExceeded {
        capacity: String,
        provenance: &'static str,
        min_pu: String,
        max_pu: String,
        limits: Vec<LimitBpu>,
    },
    RelatedMetrics {
        metric: String,
        related_metric: String,
        factor: String,
        threshold: String,
        related_threshold: String,
        ceiling: String,
        period: String,
        uniform_assumption: bool,
    },
    CostInconsistency {
        cheaper_plan: String,
        cheaper_cost: String,
        pricier_plan: String,
        pricier_cost: String,
        period: String,
        cheaper_threshold: String,
        pricier_threshold: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub summary: String,
    #[serde(flatten)]
    pub detail: Detail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub criterion: Criterion,
    pub severity: &'static str,
    /// The prevailing subject under the priority policy comes first.
    pub subjects: Vec<Subject>,
    pub explanation: Explanation,
}

impl Conflict {
    pub fn new(criterion: Criterion, subjects: Vec<Subject>, summary: String, detail: Detail) -> Self {
        assert!(!subjects.is_empty(), "a conflict needs at least one subject");
        Conflict { criterion, severity: "error", subjects, explanation: Explanation { summary, detail } }
    }

    fn sort_key(&self) -> (Criterion, Vec<Subject>) {
        let mut subjects = self.subjects.clone();
        subjects.sort();
        (self.criterion, subjects)
    }
}

/// An element that a check skipped, and why.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Exclusion {
    pub subject: Subject,
    pub reason: String,
}

/// A finding that is not a conflict.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Note {
    pub subjects: Vec<Subject>,
    pub message: String,
}

/// Capacity used for one (plan, operation, metric).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapacityUse {
    pub plan: String,
    pub operation: String,
    pub metric: String,
    pub threshold: String,
    pub period: String,
    pub provenance: &'static str,
}

impl CapacityUse {
    pub fn new(plan: &str, operation: &ApiOperation, capacity: &Capacity) -> Self {
        CapacityUse {
            plan: plan.to_string(),
            operation: operation.to_string(),
            metric: capacity.metric().to_string(),
            threshold: to_decimal_string(capacity.threshold()),
            period: capacity.period().to_string(),
            provenance: capacity.provenance().as_str(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictReport {
    verdict: Verdict,
    conflicts: Vec<Conflict>,
    exclusions: Vec<Exclusion>,
    capacities: Vec<CapacityUse>,
    warnings: Vec<Diagnostic>,
    informational: Vec<Note>,
}

impl ConflictReport {
    /// Sorts and deduplicates every list; the verdict follows from the conflicts.
    pub fn new(
        mut conflicts: Vec<Conflict>,
        mut exclusions: Vec<Exclusion>,
        capacities: Vec<CapacityUse>,
        mut informational: Vec<Note>,
    ) -> Self {
        conflicts.sort_by_cached_key(Conflict::sort_key);
        conflicts.dedup();
        exclusions.sort();
        exclusions.dedup();
        informational.sort();
        informational.dedup();
        let verdict = if conflicts.is_empty() { Verdict::Valid } else { Verdict::Invalid };
        ConflictReport { verdict, conflicts, exclusions, capacities, warnings: Vec::new(), informational }
    }

    pub fn with_warnings(mut self, warnings: Vec<Diagnostic>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }

    pub fn conflicts(&self) -> &[Conflict] {
        &self.conflicts
    }

    pub fn exclusions(&self) -> &[Exclusion] {
        &self.exclusions
    }

    pub fn capacities(&self) -> &[CapacityUse] {
        &self.capacities
    }

    pub fn warnings(&self) -> &[Diagnostic] {
        &self.warnings
    }

    pub fn informational(&self) -> &[Note] {
        &self.informational
    }

    pub fn criteria(&self) -> Vec<Criterion> {
        self.conflicts.iter().map(|c| c.criterion).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for w in &self.warnings {
            out.push_str(&format!("{w}\n"));
        }
        for c in &self.conflicts {
            out.push_str(&format!("{} {} conflict: {}\n", c.criterion, c.criterion.title(), c.explanation.summary));
            for s in &c.subjects {
                out.push_str(&format!("    at {s}\n"));
            }
        }
        for n in &self.informational {
            out.push_str(&format!("note: {}\n", n.message));
        }
        for e in &self.exclusions {
            out.push_str(&format!("skipped {}: {}\n", e.subject, e.reason));
        }
        match self.verdict {
            Verdict::Valid => out.push_str("VALID: no conflicts found\n"),
            Verdict::Invalid => out.push_str(&format!("INVALID: {} conflict(s) found\n", self.conflicts.len())),
        }
        out
    }
}
