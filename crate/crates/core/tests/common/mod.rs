#![allow(dead_code)]

use std::path::{Path, PathBuf};

use sla4oai_core::analysis::ConflictReport;
use sla4oai_core::pipeline::{analyze, AnalysisInput, Outcome};
use sla4oai_core::sla4oai::StandardLoader;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Analyzes `cases/<name>.yaml`, picking up `<name>.capacity.yaml` when present.
pub fn analyze_case(name: &str) -> ConflictReport {
    analyze_fixture(&format!("cases/{name}"))
}

pub fn analyze_fixture(stem: &str) -> ConflictReport {
    let path = fixture(&format!("{stem}.yaml"));
    let source = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let capacity = std::fs::read_to_string(fixture(&format!("{stem}.capacity.yaml"))).ok();
    let mut input = AnalysisInput::new(&source);
    if let Some(c) = &capacity {
        input = input.with_capacity(c);
    }
    match analyze(&input, &StandardLoader::beside(&path, false)) {
        Outcome::Analyzed(report) => report,
        other => panic!("{stem}: {other:?}"),
    }
}

/// The worked examples with the verdict printed next to each.
pub const WORKED_EXAMPLES: [(&str, bool); 11] = [
    ("vc2_2_valid", true),
    ("vc2_2_invalid", false),
    ("vc2_3_valid", true),
    ("vc2_3_invalid", false),
    ("vc2_4_valid", true),
    ("vc2_4_invalid", false),
    ("vc2_4_aggregated_valid", true),
    ("vc3_2_valid", true),
    ("vc3_2_invalid", false),
    ("vc4_2_valid", true),
    ("vc4_2_invalid", false),
];
