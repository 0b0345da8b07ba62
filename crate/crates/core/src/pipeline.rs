//! End-to-end runs: bytes in, diagnostics or a conflict report out.

use crate::analysis::{validity, CapacityTable, ConflictReport, PriorityPolicy};
use crate::sla4oai::{
    decode, link_oas, lower_to_model, parse_document, resolve_globs, sla_reference, syntax_check, unlinked_operations,
    Code, Diagnostic, Format, Pointer, ResourceLoader, SyntaxVerdict,
};

pub struct AnalysisInput<'a> {
    /// An SLA4OAI document, or an OpenAPI document whose `x-sla` names one.
    pub source: &'a [u8],
    pub format: Format,
    /// OpenAPI document to use instead of resolving `context.api`.
    pub oas: Option<&'a [u8]>,
    /// Capacity sidecar YAML.
    pub capacity: Option<&'a str>,
    pub policy: PriorityPolicy,
}

impl<'a> AnalysisInput<'a> {
    pub fn new(source: &'a [u8]) -> Self {
        AnalysisInput { source, format: Format::Auto, oas: None, capacity: None, policy: PriorityPolicy::default() }
    }

    pub fn with_oas(mut self, oas: &'a [u8]) -> Self {
        self.oas = Some(oas);
        self
    }

    pub fn with_capacity(mut self, capacity: &'a str) -> Self {
        self.capacity = Some(capacity);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// The document (or the capacity file) is malformed.
    SyntaxErrors(Vec<Diagnostic>),
    /// A referenced document could not be loaded.
    LinkFailure(Vec<Diagnostic>),
    Analyzed(ConflictReport),
}

impl Outcome {
    /// 0 valid, 1 conflicts, 2 syntax or schema errors, 3 I/O or linkage failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Analyzed(r) if r.is_valid() => 0,
            Outcome::Analyzed(_) => 1,
            Outcome::SyntaxErrors(_) => 2,
            Outcome::LinkFailure(_) => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SyntaxOutcome {
    Checked(SyntaxVerdict),
    LinkFailure(Vec<Diagnostic>),
}

impl SyntaxOutcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            SyntaxOutcome::Checked(v) if v.is_valid() => 0,
            SyntaxOutcome::Checked(_) => 2,
            SyntaxOutcome::LinkFailure(_) => 3,
        }
    }
}

/// The SLA bytes to analyze and the OpenAPI bytes that came with them, when
/// the input was an OpenAPI document carrying `x-sla`.
struct Located {
    sla: Vec<u8>,
    oas: Option<Vec<u8>>,
}

fn locate_sla(source: &[u8], format: Format, loader: &dyn ResourceLoader) -> Result<Located, Vec<Diagnostic>> {
    let Ok(node) = decode(source, format) else {
        return Ok(Located { sla: source.to_vec(), oas: None });
    };
    let Some(reference) = sla_reference(&node) else {
        return Ok(Located { sla: source.to_vec(), oas: None });
    };
    match loader.load(&reference) {
        Ok(sla) => Ok(Located { sla, oas: Some(source.to_vec()) }),
        Err(e) => Err(vec![Diagnostic::error(
            Code::SlaUnavailable,
            &Pointer::root().join("x-sla"),
            format!("SLA document `{reference}` unavailable: {e}"),
        )]),
    }
}

pub fn check_syntax(source: &[u8], loader: &dyn ResourceLoader) -> SyntaxOutcome {
    match locate_sla(source, Format::Auto, loader) {
        Ok(located) => SyntaxOutcome::Checked(syntax_check(&located.sla)),
        Err(d) => SyntaxOutcome::LinkFailure(d),
    }
}

pub fn analyze(input: &AnalysisInput, loader: &dyn ResourceLoader) -> Outcome {
    let Located { sla, oas: embedded_oas } = match locate_sla(input.source, input.format, loader) {
        Ok(found) => found,
        Err(d) => return Outcome::LinkFailure(d),
    };
    let format = if embedded_oas.is_some() { Format::Auto } else { input.format };
    let parsed = match parse_document(&sla, format) {
        Ok(p) => p,
        Err(d) => return Outcome::SyntaxErrors(d),
    };
    let mut warnings = parsed.warnings;
    let doc = parsed.document;

    let declared = match input.capacity.map(CapacityTable::from_yaml).transpose() {
        Ok(t) => t.unwrap_or_default(),
        Err(e) => {
            return Outcome::SyntaxErrors(vec![Diagnostic::error(Code::InvalidCapacity, &Pointer::root(), e.to_string())])
        }
    };

    let oas = input.oas.or(embedded_oas.as_deref());
    let operations = match link_oas(&doc, oas, loader) {
        Ok(linked) => {
            warnings.extend(linked.warnings);
            linked.operations
        }
        Err(diagnostics) => {
            warnings.extend(diagnostics.into_iter().map(Diagnostic::downgraded));
            unlinked_operations(&doc)
        }
    };
    let resolution = match resolve_globs(&doc, &operations) {
        Ok(r) => r,
        Err(d) => return Outcome::SyntaxErrors(d),
    };
    warnings.extend(resolution.warnings.iter().cloned());
    let lowered = match lower_to_model(&doc, &resolution) {
        Ok(l) => l,
        Err(d) => return Outcome::SyntaxErrors(d),
    };
    warnings.extend(lowered.warnings);

    Outcome::Analyzed(validity(&lowered.pricing, &declared, &input.policy).with_warnings(warnings))
}
