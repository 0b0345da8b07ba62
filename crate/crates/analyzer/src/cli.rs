//! Argument parsing and the single-shot CLI run.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use sla4oai_core::analysis::PriorityPolicy;
use sla4oai_core::pipeline::{analyze, check_syntax, AnalysisInput};
use sla4oai_core::sla4oai::{Format, StandardLoader};

use crate::render::{render_outcome, render_syntax, OutputFormat};

/// Exit status for I/O problems and usage errors.
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operation {
    Syntax,
    Validity,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "sla4oai-analyzer", version, about = "Checks SLA4OAI pricing documents for syntax errors and validity conflicts")]
pub struct Cli {
    /// What to run on the document.
    #[arg(short = 'o', long, value_enum, required_unless_present = "serve")]
    pub operation: Option<Operation>,
    /// SLA4OAI document, or an OpenAPI document with `x-sla`.
    #[arg(short = 'f', long, required_unless_present = "serve")]
    pub file: Option<PathBuf>,
    /// Capacity sidecar YAML: path -> method -> metric -> {threshold, period}.
    #[arg(long)]
    pub capacity: Option<PathBuf>,
    /// OpenAPI document to use instead of `context.api`.
    #[arg(long)]
    pub oas: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
    /// Serve the HTTP API on HOST:PORT instead of running once.
    #[arg(long, value_name = "HOST:PORT", conflicts_with_all = ["operation", "file"])]
    pub serve: Option<String>,
    /// Allow fetching http(s) references.
    #[arg(long, env = "SLA_ANALYZER_ALLOW_FETCH", value_parser = parse_flag, num_args = 0, default_missing_value = "true", default_value = "false")]
    pub allow_fetch: bool,
}

/// Accepts the usual spellings so `SLA_ANALYZER_ALLOW_FETCH=1` works.
fn parse_flag(raw: &str) -> Result<bool, String> {
    match raw.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" | "" => Ok(false),
        other => Err(format!("expected a boolean, got `{other}`")),
    }
}

/// Parses arguments; on a usage error returns the message and exit code
/// (0 for --help and --version).
pub fn parse_args<I, T>(args: I) -> Result<Cli, (String, i32)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args).map_err(|e| {
        let code = if e.use_stderr() { EXIT_IO } else { 0 };
        (e.render().to_string(), code)
    })
}

/// Output of a finished run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &Path, what: &str) -> Result<Vec<u8>, RunResult> {
    std::fs::read(path).map_err(|e| RunResult {
        exit_code: EXIT_IO,
        stdout: String::new(),
        stderr: format!("cannot read {what} `{}`: {e}\n", path.display()),
    })
}

pub fn run(cli: &Cli) -> RunResult {
    match run_inner(cli) {
        Ok(r) | Err(r) => r,
    }
}

fn run_inner(cli: &Cli) -> Result<RunResult, RunResult> {
    let (Some(operation), Some(file)) = (cli.operation, cli.file.as_deref()) else {
        return Err(RunResult { exit_code: EXIT_IO, stdout: String::new(), stderr: "--operation and --file are required\n".into() });
    };
    let source = read(file, "document")?;
    let loader = StandardLoader::beside(file, cli.allow_fetch);
    if operation == Operation::Syntax {
        let outcome = check_syntax(&source, &loader);
        return Ok(RunResult { exit_code: outcome.exit_code(), stdout: render_syntax(&outcome, cli.format), stderr: String::new() });
    }
    let oas = cli.oas.as_deref().map(|p| read(p, "OpenAPI document")).transpose()?;
    let capacity = match cli.capacity.as_deref() {
        Some(p) => Some(String::from_utf8(read(p, "capacity file")?).map_err(|_| RunResult {
            exit_code: EXIT_IO,
            stdout: String::new(),
            stderr: format!("capacity file `{}` is not UTF-8\n", p.display()),
        })?),
        None => None,
    };
    let input = AnalysisInput {
        source: &source,
        format: Format::Auto,
        oas: oas.as_deref(),
        capacity: capacity.as_deref(),
        policy: PriorityPolicy::default(),
    };
    let outcome = analyze(&input, &loader);
    Ok(RunResult { exit_code: outcome.exit_code(), stdout: render_outcome(&outcome, cli.format), stderr: String::new() })
}
