//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 failed consistency check or
//! property violation, 3 I/O, parse or usage error.

pub mod input;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{standard_entries, CatalogEntry, CatalogError};
use crate::checks::all_pass;
use crate::graph::{validate, ReductionGraph};
use crate::jumps::JumpError;
use crate::verify::{
    run_graph_suite, run_lattice_suite, run_monoid_suite, LatticeConfig, MonoidConfig,
    SuiteReport,
};
use input::{parse_document, parse_input, GraphDocument, InputError};
use report::{build_report, ReportOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CONSISTENCY: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "jumpcalc",
    version,
    about = "Jumps, tame base change conductor and stabilization index of a Jacobian from its reduction graph"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyse a reduction graph and print its report.
    Compute(ComputeArgs),
    /// Check a graph document against the structural invariants.
    Validate(SourceArgs),
    /// Contract exceptional curves and print the minimal model as a document.
    Minimize(SourceArgs),
    /// List the built-in graphs, or print one as a document.
    Catalog(CatalogArgs),
    /// Run the seeded property suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Graph document; `-` reads standard input.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Built-in Kodaira type, e.g. `II`, `I3`, `I2*`, `IV*`, `I1res`.
    #[arg(long, value_name = "TAG")]
    kodaira: Option<String>,
    /// Built-in genus-2 configuration.
    #[arg(long)]
    genus2_example: bool,
}

#[derive(Args, Debug)]
struct SourceArgs {
    #[command(flatten)]
    source: Source,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckSet {
    All,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run the consistency checks; any failure exits with status 2.
    #[arg(long, value_enum)]
    check: Option<CheckSet>,
    /// Analyse the minimal model instead of the input.
    #[arg(long)]
    minimize: bool,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long, value_name = "TAG")]
    kodaira: Option<String>,
    #[arg(long, conflicts_with = "kodaira")]
    genus2_example: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Lattices,
    Monoids,
    Graphs,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random instances per property.
    #[arg(long, default_value_t = 100)]
    count: u64,
}

/// Failure of a command, carrying its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        let code = match e {
            InputError::Parse { .. } => EXIT_IO,
            InputError::Validation(_) => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Failure::new(EXIT_INVALID, e.to_string())
    }
}

impl From<JumpError> for Failure {
    fn from(e: JumpError) -> Self {
        let code = match e {
            JumpError::Graph(_) | JumpError::Overflow => EXIT_INVALID,
            _ => EXIT_CONSISTENCY,
        };
        Failure::new(code, e.to_string())
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut out = String::new();
    let result = match cli.command {
        Command::Compute(a) => compute(a, stdin, &mut out),
        Command::Validate(a) => validate_cmd(a, stdin, &mut out),
        Command::Minimize(a) => minimize(a, stdin, &mut out),
        Command::Catalog(a) => catalog(a, &mut out),
        Command::Verify(a) => verify(a, &mut out),
    };
    let _ = stdout.write_all(out.as_bytes());
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read_source(path: &PathBuf, stdin: &mut dyn Read) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    if path.as_os_str() == "-" {
        stdin
            .read_to_end(&mut buf)
            .map_err(|e| Failure::new(EXIT_IO, format!("reading standard input: {e}")))?;
    } else {
        buf = std::fs::read(path)
            .map_err(|e| Failure::new(EXIT_IO, format!("reading {}: {e}", path.display())))?;
    }
    Ok(buf)
}

fn load(source: &Source, stdin: &mut dyn Read) -> Result<ReductionGraph, Failure> {
    if let Some(path) = &source.input {
        return Ok(parse_input(&read_source(path, stdin)?)?);
    }
    if let Some(tag) = &source.kodaira {
        let entry: CatalogEntry = tag.parse()?;
        return Ok(entry.graph()?);
    }
    Ok(CatalogEntry::Genus2Example.graph()?)
}

fn compute(a: ComputeArgs, stdin: &mut dyn Read, out: &mut String) -> Result<i32, Failure> {
    let g = load(&a.source, stdin)?;
    let opts = ReportOptions {
        checks: a.check.is_some(),
        minimize: a.minimize,
    };
    let report = build_report(&g, &opts)?;
    match a.format {
        Format::Text => out.push_str(&report.to_text()),
        Format::Json => {
            out.push_str(&report.to_json());
            out.push('\n');
        }
    }
    if all_pass(&report.checks) {
        Ok(EXIT_OK)
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::new(
            EXIT_CONSISTENCY,
            format!("consistency checks failed: {}", failed.join(", ")),
        ))
    }
}

fn validate_cmd(a: SourceArgs, stdin: &mut dyn Read, out: &mut String) -> Result<i32, Failure> {
    if let Some(path) = &a.source.input {
        let doc = parse_document(&read_source(path, stdin)?)?;
        let report = validate(&doc.to_raw());
        if report.is_pass() {
            out.push_str("valid\n");
            return Ok(EXIT_OK);
        }
        return Err(Failure::new(EXIT_INVALID, format!("invalid reduction graph:\n{report}")));
    }
    load(&a.source, stdin)?;
    out.push_str("valid\n");
    Ok(EXIT_OK)
}

fn minimize(a: SourceArgs, stdin: &mut dyn Read, out: &mut String) -> Result<i32, Failure> {
    let g = load(&a.source, stdin)?;
    out.push_str(&GraphDocument::from_graph(&g.minimize()).to_json());
    out.push('\n');
    Ok(EXIT_OK)
}

fn catalog(a: CatalogArgs, out: &mut String) -> Result<i32, Failure> {
    let entry = match (&a.kodaira, a.genus2_example) {
        (Some(tag), _) => Some(tag.parse::<CatalogEntry>()?),
        (None, true) => Some(CatalogEntry::Genus2Example),
        (None, false) => None,
    };
    if let Some(e) = entry {
        out.push_str(&GraphDocument::from_graph(&e.graph()?).to_json());
        out.push('\n');
        return Ok(EXIT_OK);
    }
    let _ = writeln!(out, "{:<8} {:>8} {:>6} {:>6}", "tag", "vertices", "edges", "genus");
    for e in standard_entries() {
        let g = e.graph()?;
        let _ = writeln!(
            out,
            "{:<8} {:>8} {:>6} {:>6}",
            e.tag(),
            g.vertex_count(),
            g.edge_count(),
            g.genus()
        );
    }
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, out: &mut String) -> Result<i32, Failure> {
    let mut reports: Vec<SuiteReport> = Vec::new();
    let wants = |s: SuiteArg| a.suite == s || a.suite == SuiteArg::All;
    if wants(SuiteArg::Lattices) {
        reports.push(run_lattice_suite(a.seed, LatticeConfig::uniform(a.count)));
    }
    if wants(SuiteArg::Monoids) {
        reports.push(run_monoid_suite(a.seed, MonoidConfig::with_count(a.count)));
    }
    if wants(SuiteArg::Graphs) {
        reports.push(run_graph_suite(a.seed, a.count));
    }
    for r in &reports {
        out.push_str(&r.to_string());
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.all_pass())
        .map(|r| r.suite.to_string())
        .collect();
    if failed.is_empty() {
        let _ = writeln!(out, "all properties hold");
        Ok(EXIT_OK)
    } else {
        Err(Failure::new(
            EXIT_CONSISTENCY,
            format!("property violations in: {}", failed.join(", ")),
        ))
    }
}
