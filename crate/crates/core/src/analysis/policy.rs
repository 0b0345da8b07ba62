//! Which of two conflicting limits prevails.

use std::cmp::Ordering;

use crate::model::WindowKind;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PriorityRule {
    ShorterPeriodFirst,
    RateOverQuota,
    RequestsMetricFirst,
}

/// What the policy needs to know about a limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitKey<'a> {
    pub window: WindowKind,
    pub metric: &'a str,
    /// `None` for period-less limits, which sort after every period.
    pub period_seconds: Option<Rational>,
    /// Position in declaration order.
    pub index: usize,
}

/// Ordered rules; earlier rules decide first. Remaining ties fall back to the
/// metric name and then declaration order, so the order is total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityPolicy {
    rules: Vec<PriorityRule>,
}

impl Default for PriorityPolicy {
    fn default() -> Self {
        PriorityPolicy {
            rules: vec![PriorityRule::ShorterPeriodFirst, PriorityRule::RateOverQuota, PriorityRule::RequestsMetricFirst],
        }
    }
}

impl PriorityPolicy {
    pub fn new(rules: Vec<PriorityRule>) -> Self {
        PriorityPolicy { rules }
    }

    pub fn rules(&self) -> &[PriorityRule] {
        &self.rules
    }

    /// `Less` means `a` prevails over `b`.
    pub fn compare(&self, a: &LimitKey, b: &LimitKey) -> Ordering {
        self.rules
            .iter()
            .map(|rule| match rule {
                PriorityRule::ShorterPeriodFirst => match (&a.period_seconds, &b.period_seconds) {
                    (Some(x), Some(y)) => x.cmp(y),
                    (Some(_), None) => Ordering::Less,
                    (None, Some(_)) => Ordering::Greater,
                    (None, None) => Ordering::Equal,
                },
                PriorityRule::RateOverQuota => b.window.is_sliding().cmp(&a.window.is_sliding()),
                PriorityRule::RequestsMetricFirst => (b.metric == "requests").cmp(&(a.metric == "requests")),
            })
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.metric.cmp(b.metric))
            .then_with(|| a.index.cmp(&b.index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn key(window: WindowKind, metric: &str, seconds: Option<i64>, index: usize) -> LimitKey<'_> {
        LimitKey { window, metric, period_seconds: seconds.map(int), index }
    }

    #[test]
    fn default_rules_in_order() {
        let p = PriorityPolicy::default();
        let second = key(WindowKind::Quota, "matches", Some(1), 3);
        let day = key(WindowKind::Rate, "requests", Some(86_400), 0);
        assert_eq!(p.compare(&second, &day), Ordering::Less);

        let rate = key(WindowKind::Rate, "matches", Some(60), 1);
        let quota = key(WindowKind::Quota, "requests", Some(60), 0);
        assert_eq!(p.compare(&rate, &quota), Ordering::Less);

        let req = key(WindowKind::Rate, "requests", Some(60), 1);
        let other = key(WindowKind::Rate, "bytes", Some(60), 0);
        assert_eq!(p.compare(&req, &other), Ordering::Less);
    }

    #[test]
    fn ties_break_by_name_then_declaration() {
        let p = PriorityPolicy::default();
        let a = key(WindowKind::Rate, "alpha", Some(1), 5);
        let b = key(WindowKind::Rate, "beta", Some(1), 0);
        assert_eq!(p.compare(&a, &b), Ordering::Less);
        let first = key(WindowKind::Rate, "alpha", Some(1), 0);
        assert_eq!(p.compare(&a, &first), Ordering::Greater);
        assert_eq!(p.compare(&a, &a), Ordering::Equal);
    }

    #[test]
    fn custom_policy() {
        let p = PriorityPolicy::new(vec![PriorityRule::RateOverQuota]);
        let long_rate = key(WindowKind::Rate, "requests", Some(86_400), 0);
        let short_quota = key(WindowKind::Quota, "requests", Some(1), 1);
        assert_eq!(p.compare(&long_rate, &short_quota), Ordering::Less);
    }
}
