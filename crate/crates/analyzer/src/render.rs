//! Text and JSON renderings of analysis outcomes. The JSON forms are shared
//! by the CLI and the HTTP service.

use serde::Serialize;
use sla4oai_core::pipeline::{Outcome, SyntaxOutcome};
use sla4oai_core::sla4oai::{Diagnostic, SyntaxVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct DiagnosticsBody<'a> {
    verdict: &'a str,
    diagnostics: &'a [Diagnostic],
}

/// `{verdict, diagnostics}` for runs that stopped before analysis.
pub fn diagnostics_json(verdict: &str, diagnostics: &[Diagnostic]) -> String {
    serde_json::to_string_pretty(&DiagnosticsBody { verdict, diagnostics }).expect("diagnostics serialize")
}

fn diagnostic_lines(diagnostics: &[Diagnostic]) -> String {
    diagnostics.iter().map(|d| format!("{d}\n")).collect()
}

pub fn render_outcome(outcome: &Outcome, format: OutputFormat) -> String {
    match (outcome, format) {
        (Outcome::Analyzed(report), OutputFormat::Json) => report.to_json(),
        (Outcome::Analyzed(report), OutputFormat::Text) => report.render_text(),
        (Outcome::SyntaxErrors(d), OutputFormat::Json) => diagnostics_json("syntax_error", d),
        (Outcome::SyntaxErrors(d), OutputFormat::Text) => {
            format!("{}SYNTAX ERROR: {} problem(s) found\n", diagnostic_lines(d), d.iter().filter(|d| d.is_error()).count())
        }
        (Outcome::LinkFailure(d), OutputFormat::Json) => diagnostics_json("link_failure", d),
        (Outcome::LinkFailure(d), OutputFormat::Text) => format!("{}LINK FAILURE\n", diagnostic_lines(d)),
    }
}

pub fn render_syntax(outcome: &SyntaxOutcome, format: OutputFormat) -> String {
    let (verdict, diagnostics) = match outcome {
        SyntaxOutcome::Checked(SyntaxVerdict::Valid { warnings }) => ("valid", warnings.as_slice()),
        SyntaxOutcome::Checked(SyntaxVerdict::Invalid(d)) => ("syntax_error", d.as_slice()),
        SyntaxOutcome::LinkFailure(d) => ("link_failure", d.as_slice()),
    };
    match format {
        OutputFormat::Json => diagnostics_json(verdict, diagnostics),
        OutputFormat::Text => {
            let summary = match verdict {
                "valid" => "SYNTAX OK".to_string(),
                "syntax_error" => {
                    format!("SYNTAX ERROR: {} problem(s) found", diagnostics.iter().filter(|d| d.is_error()).count())
                }
                _ => "LINK FAILURE".to_string(),
            };
            format!("{}{summary}\n", diagnostic_lines(diagnostics))
        }
    }
}
