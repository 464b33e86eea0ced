use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psi11_core::corpus::ResidualReport;
use psi11_core::number_theory::{squares_table, SquaresRow};
use psi11_core::suite::{self, BackendSelection, OutputFormat, RunConfig, Selection};

mod render;

#[derive(Parser)]
#[command(name = "psi11", version, about = "Verify bilateral q-series identities and emit residual reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity checks and print one line (or record) per instance.
    Verify(RunArgs),
    /// Tabulate r_s(n) by enumeration, divisor formula and generating function.
    Squares(SquaresArgs),
    /// Emit the JSON report of a fresh run, or re-emit a saved one.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Formal,
    Numeric,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Registry name; repeatable.
    #[arg(long = "identity", value_name = "NAME")]
    identities: Vec<String>,
    /// Every registered identity.
    #[arg(long, conflicts_with = "identities")]
    all: bool,
    #[arg(long, value_enum, default_value = "both")]
    backend: BackendArg,
    /// Formal truncation order N.
    #[arg(long, default_value_t = 30, allow_negative_numbers = true)]
    order: i64,
    /// Working precision in bits.
    #[arg(long, default_value_t = 256)]
    precision: u32,
    #[arg(long, default_value_t = 1e-25, allow_negative_numbers = true)]
    tolerance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Matrix dimension for the noncommutative instances.
    #[arg(short = 'd', long = "dim")]
    dim: Option<usize>,
    /// Leave wall times out so reports are byte-reproducible.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SquaresArgs {
    /// Number of squares: 1, 2, 3, 4 or 6.
    #[arg(short = 's', long = "squares")]
    s: u32,
    #[arg(long = "max-n", default_value_t = 20)]
    max_n: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Saved JSON report to re-emit instead of running.
    #[arg(long, value_name = "PATH")]
    from: Option<PathBuf>,
}

/// Exit 2: bad configuration or IO.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

impl RunArgs {
    fn config(&self, format: Option<OutputFormat>) -> RunConfig {
        RunConfig {
            backend: match self.backend {
                BackendArg::Formal => BackendSelection::Formal,
                BackendArg::Numeric => BackendSelection::Numeric,
                BackendArg::Both => BackendSelection::Both,
            },
            order: self.order,
            precision: self.precision,
            tolerance: self.tolerance,
            seed: self.seed,
            selection: if self.all { Selection::All } else { Selection::Named(self.identities.clone()) },
            dim: self.dim,
            format: format.unwrap_or(match self.format {
                FormatArg::Text => OutputFormat::Text,
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Csv => OutputFormat::Csv,
            }),
            out: self.out.clone(),
            timing: !self.no_timing,
        }
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Fatal> {
    match out {
        Some(p) => fs::write(p, body).map_err(|e| Fatal(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout().write_all(body.as_bytes()).map_err(Fatal::from),
    }
}

fn verdict(reports: &[ResidualReport]) -> ExitCode {
    if suite::all_pass(reports) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn verify(cfg: &RunConfig) -> Result<ExitCode, Fatal> {
    let reports = suite::corpus_run(cfg)?;
    let body = match cfg.format {
        OutputFormat::Text => render::text(&reports),
        OutputFormat::Json => suite::reports_json(&reports),
        OutputFormat::Csv => render::reports_csv(&reports)?,
    };
    emit(cfg.out.as_deref(), &body)?;
    Ok(verdict(&reports))
}

fn squares(a: &SquaresArgs) -> Result<ExitCode, Fatal> {
    let rows = squares_table(a.s, a.max_n)?;
    let body = match a.format {
        FormatArg::Csv => render::squares_csv(a.s, &rows)?,
        FormatArg::Json => render::squares_json(a.s, &rows),
        FormatArg::Text => render::squares_text(a.s, &rows),
    };
    emit(a.out.as_deref(), &body)?;
    Ok(if rows.iter().all(|r: &SquaresRow| r.matches) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn report(a: &ReportArgs) -> Result<ExitCode, Fatal> {
    let cfg = a.run.config(Some(OutputFormat::Json));
    match &a.from {
        None => verify(&cfg),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Fatal(format!("cannot read {}: {e}", path.display())))?;
            let (body, pass) = render::resave(&text)?;
            emit(cfg.out.as_deref(), &body)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => verify(&a.config(None)),
        Command::Squares(a) => squares(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
