//! `toroidal`: toroidal hulls and toroidal resolution traces for ideals on
//! affine snc models.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 validation error,
//! 3 step cap exceeded, 4 verification failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use toroidal_core::fan::{DivisorId, IdealSheafModel};
use toroidal_core::field::Field;
use toroidal_core::hull::sheaf_hull;
use toroidal_core::resolve::{resolve_sequence, strategy_by_name, Status, DEFAULT_MAX_STEPS};
use toroidal_core::trace::{write_atomic, ModelDocument, TraceDocument};
use toroidal_core::verify::{verify_model, VerificationReport, DEFAULT_SEED};
use toroidal_core::Error;

#[derive(Parser)]
#[command(name = "toroidal", version, about = "Toroidal hulls and toroidal blow-up sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the toroidal hull of the input ideal and its stratum semigroups.
    Hull(HullArgs),
    /// Resolve the input by toroidally equimultiple blow-ups.
    Resolve(ResolveArgs),
}

#[derive(Args)]
struct HullArgs {
    /// Model document (JSON).
    file: PathBuf,
    /// Override the document's field: `q` or `fp:<prime>`.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args)]
struct ResolveArgs {
    /// Model document (JSON).
    #[arg(required_unless_present = "replay")]
    file: Option<PathBuf>,
    #[arg(long, default_value = "min-max-mult")]
    strategy: String,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
    /// Override the document's field: `q` or `fp:<prime>`.
    #[arg(long)]
    field: Option<String>,
    /// Write the trace document here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Run the verification checks and append the report.
    #[arg(long)]
    verify: bool,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Replay a trace file and check that it reproduces its final model.
    #[arg(long, hide = true, conflicts_with = "file")]
    replay: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Validation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) => m,
        }
    }
}

/// Polynomial syntax errors are parse errors; everything else about a
/// well-formed document is a validation error.
fn classify(e: Error) -> Failure {
    match e {
        Error::Parse(_) => Failure::Usage(e.to_string()),
        other => Failure::Validation(other.to_string()),
    }
}

fn load(path: &Path, field: Option<&str>) -> Result<(ModelDocument, IdealSheafModel), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut doc = ModelDocument::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let Some(f) = field {
        let f: Field = f.parse().map_err(|e| Failure::Usage(format!("--field: {e}")))?;
        doc = doc.with_field(f);
    }
    let model = doc.to_model().map_err(classify)?;
    Ok((doc, model))
}

fn monomial(names: &[String], exps: &[u32]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Generators in lex-descending order of exponents: `x^2, x*y, y^3`.
fn generator_list(names: &[String], ideal: &toroidal_core::monomial_ideal::MonomialIdeal) -> String {
    let mut arrays = ideal.to_arrays();
    arrays.sort_by(|a, b| b.cmp(a));
    arrays.iter().map(|g| monomial(names, g)).collect::<Vec<_>>().join(", ")
}

fn hull_report(model: &IdealSheafModel) -> Result<String, Failure> {
    let sh = sheaf_hull(model).map_err(classify)?;
    let mut out = String::new();
    for chart in model.charts() {
        let names = model.cone_names(chart.cone());
        let hull = chart.hull();
        if hull.is_unit() {
            writeln!(out, "chart {{{}}}: unit ideal (toroidally resolved)", names.join(", ")).unwrap();
        } else {
            writeln!(out, "chart {{{}}}: {}", names.join(", "), generator_list(&names, hull)).unwrap();
        }
    }
    writeln!(out, "strata:").unwrap();
    let mut strata: Vec<_> = sh.family.iter().collect();
    strata.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
    for (key, ideal) in strata {
        let names: Vec<String> = key.iter().map(|&id| model.registry().name(DivisorId(id)).to_string()).collect();
        writeln!(out, "  {{{}}}: {}", names.join(", "), generator_list(&names, ideal)).unwrap();
    }
    Ok(out)
}

fn cmd_hull(args: &HullArgs) -> Result<(), Failure> {
    let (_, model) = load(&args.file, args.field.as_deref())?;
    print!("{}", hull_report(&model)?);
    Ok(())
}

fn report_lines(report: &VerificationReport) -> String {
    let mut out = format!("verification (seed {}):\n", report.seed);
    for e in &report.entries {
        let mark = if e.passed { "pass" } else { "FAIL" };
        if e.detail.is_empty() {
            writeln!(out, "  [{mark}] {}", e.name).unwrap();
        } else {
            writeln!(out, "  [{mark}] {}: {}", e.name, e.detail).unwrap();
        }
    }
    out
}

fn cmd_replay(path: &Path) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let doc = TraceDocument::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let model = doc.replay().map_err(classify)?;
    println!(
        "replay ok: {} steps, {} final charts identical",
        doc.sequence.steps.len(),
        model.chart_count()
    );
    Ok(0)
}

fn cmd_resolve(args: &ResolveArgs) -> Result<u8, Failure> {
    if let Some(path) = &args.replay {
        return cmd_replay(path);
    }
    let file = args.file.as_ref().expect("clap requires a file without --replay");
    let strategy = strategy_by_name(&args.strategy).map_err(|e| Failure::Usage(e.to_string()))?;
    if args.max_steps == 0 {
        return Err(Failure::Usage("--max-steps must be at least 1".into()));
    }
    let (doc, model) = load(file, args.field.as_deref())?;
    let trace = resolve_sequence(&model, strategy.as_ref(), args.max_steps).map_err(classify)?;
    let mut trace_doc = TraceDocument::new(&doc, &trace);
    if args.verify {
        let report = verify_model(&model, strategy.as_ref(), args.max_steps, args.seed).map_err(classify)?;
        trace_doc.verification = Some(report);
    }

    let status = match trace.status {
        Status::Resolved => "resolved",
        Status::StepCapExceeded => "step-cap-exceeded",
    };
    println!("status: {status}");
    println!("steps: {}", trace.steps.len());
    let registry = trace.final_model.registry();
    for s in &trace.steps {
        println!(
            "  {}. center {{{}}} m={} -> {}",
            s.index + 1,
            s.center_names.join(", "),
            s.multiplicity,
            registry.name(s.new_divisor)
        );
    }
    let unit = trace.final_model.charts().filter(|c| c.hull().is_unit()).count();
    println!("final charts: {} ({} unit)", trace.final_model.chart_count(), unit);
    if let Some(report) = &trace_doc.verification {
        print!("{}", report_lines(report));
    }
    if let Some(path) = &args.trace {
        write_atomic(path, trace_doc.to_json().as_bytes())
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        println!("trace: {}", path.display());
    }

    if trace_doc.verification.as_ref().is_some_and(|r| !r.passed()) {
        eprintln!("error: verification failed");
        return Ok(4);
    }
    Ok(match trace.status {
        Status::Resolved => 0,
        Status::StepCapExceeded => {
            eprintln!("error: step cap of {} reached before the ideal was resolved", args.max_steps);
            3
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Hull(args) => cmd_hull(args).map(|_| 0),
        Command::Resolve(args) => cmd_resolve(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
