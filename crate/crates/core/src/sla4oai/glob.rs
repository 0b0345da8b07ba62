//! Path globbing. `*` matches any run of characters, `/` included, so
//! `/v3/*` covers every path under `/v3/`.

use std::cmp::Ordering;

use crate::model::HttpMethod;

/// Adds a leading slash when missing and strips one trailing slash.
pub fn normalize_path(raw: &str) -> String {
    let trimmed = raw.trim();
    let mut path = if trimmed.starts_with('/') { trimmed.to_string() } else { format!("/{trimmed}") };
    if path.len() > 1 && path.ends_with('/') {
        path.pop();
    }
    path
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Literal(String),
    /// A segment containing at least one `*`.
    Wildcard(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobPattern {
    raw: String,
    normalized: String,
    segments: Vec<Segment>,
}

/// Ordering key: literal segments before the first wildcard, then literal
/// character count. Larger is more specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Specificity {
    pub literal_prefix_segments: usize,
    pub literal_chars: usize,
}

impl GlobPattern {
    pub fn new(raw: &str) -> Self {
        let normalized = normalize_path(raw);
        let segments = normalized
            .split('/')
            .skip(1)
            .map(|s| if s.contains('*') { Segment::Wildcard(s.to_string()) } else { Segment::Literal(s.to_string()) })
            .collect();
        GlobPattern { raw: raw.to_string(), normalized, segments }
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn normalized(&self) -> &str {
        &self.normalized
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_glob(&self) -> bool {
        self.normalized.contains('*')
    }

    pub fn specificity(&self) -> Specificity {
        Specificity {
            literal_prefix_segments: self.segments.iter().take_while(|s| matches!(s, Segment::Literal(_))).count(),
            literal_chars: self.normalized.chars().filter(|&c| c != '*').count(),
        }
    }

    pub fn matches(&self, path: &str) -> bool {
        wildcard_match(self.normalized.as_bytes(), normalize_path(path).as_bytes())
    }
}

fn wildcard_match(pattern: &[u8], text: &[u8]) -> bool {
    let (mut p, mut t) = (0, 0);
    let mut backtrack: Option<(usize, usize)> = None;
    while t < text.len() {
        if p < pattern.len() && pattern[p] == b'*' {
            backtrack = Some((p, t));
            p += 1;
        } else if p < pattern.len() && pattern[p] == text[t] {
            p += 1;
            t += 1;
        } else if let Some((star, matched)) = backtrack {
            p = star + 1;
            t = matched + 1;
            backtrack = Some((star, matched + 1));
        } else {
            return false;
        }
    }
    pattern[p..].iter().all(|&b| b == b'*')
}

/// Full priority of a (path pattern, method) entry. Any concrete method
/// outranks `all`; path specificity decides next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntryPriority {
    pub concrete_method: bool,
    pub path: Specificity,
}

impl EntryPriority {
    pub fn of(pattern: &GlobPattern, method: HttpMethod) -> Self {
        EntryPriority { concrete_method: !method.is_all(), path: pattern.specificity() }
    }
}

impl PartialOrd for EntryPriority {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EntryPriority {
    fn cmp(&self, other: &Self) -> Ordering {
        self.concrete_method.cmp(&other.concrete_method).then(self.path.cmp(&other.path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_paths() {
        assert_eq!(normalize_path("v3/person.enrich"), "/v3/person.enrich");
        assert_eq!(normalize_path("/v3/x/"), "/v3/x");
        assert_eq!(normalize_path("/"), "/");
        assert_eq!(normalize_path("*"), "/*");
    }

    #[test]
    fn prefix_wildcards() {
        let g = GlobPattern::new("/v3/*");
        assert!(g.matches("/v3/a"));
        assert!(g.matches("/v3/operation/x"));
        assert!(!g.matches("/api/v3/a"));
        assert!(!g.matches("/v3"));
        assert!(GlobPattern::new("/*").matches("/anything/at/all"));
        assert!(GlobPattern::new("/v*/a").matches("/v3/a"));
        assert!(!GlobPattern::new("/v*/a").matches("/v3/b"));
        assert!(GlobPattern::new("/a/*/c").matches("/a/b/c"));
    }

    #[test]
    fn specificity_orders_nested_globs() {
        let broad = GlobPattern::new("/v3/*").specificity();
        let narrow = GlobPattern::new("/v3/operation/*").specificity();
        let literal = GlobPattern::new("/v3/operation/x").specificity();
        assert!(narrow > broad);
        assert!(literal > narrow);
        assert_eq!(broad.literal_prefix_segments, 1);
        assert_eq!(narrow.literal_prefix_segments, 2);
    }

    #[test]
    fn concrete_method_beats_all() {
        let broad_get = EntryPriority::of(&GlobPattern::new("/*"), HttpMethod::Get);
        let literal_all = EntryPriority::of(&GlobPattern::new("/v3/a"), HttpMethod::All);
        assert!(broad_get > literal_all);
    }
}
