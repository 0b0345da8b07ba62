//! SLA4OAI documents: parsing, structural checks, OpenAPI linking, glob
//! resolution, lowering to the pricing model and serialization.

mod diagnostic;
mod document;
mod glob;
mod lower;
mod oas;
mod resolve;
mod value;
mod write;

pub use diagnostic::{has_errors, Code, Diagnostic, Severity};
pub use document::{
    decode, parse_document, syntax_check, Context, DocumentType, Format, Infrastructure, LimitTree, MetricLimits,
    MetricSection, Parsed, PeriodSpec, PlanSection, PricingSection, RawLimit, RelationshipSpec, Sla4oaiDocument,
    SyntaxVerdict,
};
pub use glob::{normalize_path, EntryPriority, GlobPattern, Segment, Specificity};
pub use lower::{lower_to_model, Lowered, DEFAULT_CURRENCY};
pub use oas::{
    is_remote, link_oas, parse_oas, sla_reference, unlinked_operations, InMemoryLoader, LoadError, Linked,
    OperationSet, ResourceLoader, StandardLoader,
};
pub use resolve::{billing_period, plan_sections, resolve_globs, GlobResolution, LimitSource, ResolvedLimitation};
pub use value::{emit_json, emit_yaml, parse_json, parse_yaml, Node, Pointer, SyntaxFailure};
pub use write::{serialize_document, serialize_with_context, to_node, WriteContext};
