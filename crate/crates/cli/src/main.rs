//! `tangles`: command-line front end for tangle-core.
//!
//! Exit codes: 0 when the report passes, 2 when it was computed but a
//! checked property fails, 1 when it could not be computed.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::io::{config_hash, emit, CliError, CliResult};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Layered presentation of a generated family, with its top layer graph.
    Generate,
    /// All tangles of order `--order` of a graph.
    Tangles,
    /// Tree of tangles of order `--order` with its verification report.
    Tot,
    /// Tree-decomposition induced by a nested set (inputs: graph, nested set).
    Decompose,
    /// Exhaustiveness verdict, limit separator growth and pseudo-tightness of
    /// a chain (inputs: presentation, optional chain).
    Limits,
    /// Interlaced sequence with tangle assignment (inputs: graph, nested set,
    /// sequence, pool; or a clique_chain family).
    Interlace,
    /// Ray classes, thin-end bounds, packings and the thick-end pipeline.
    Ends,
    /// Checks an artifact against a graph (inputs: graph, artifact, optional
    /// nested set for decompositions).
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Tangles => "tangles",
            Command::Tot => "tot",
            Command::Decompose => "decompose",
            Command::Limits => "limits",
            Command::Interlace => "interlace",
            Command::Ends => "ends",
            Command::Verify => "verify",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tangles", version, about = "Separations, tangles, trees of tangles and end evidence")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// Input document; repeat for commands taking several.
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,
    /// Generated family instead of an input document.
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Clique sizes for clique_chain, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Number of columns for a grid strip.
    #[arg(long, global = true)]
    pub width: Option<usize>,
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Tangle order `k`: separations of order below `k` are oriented.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Cap on enumerated candidates in exhaustive searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for independent per-item work; output does not
    /// depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
}

/// A computed report: `passes == false` maps to exit code 2.
pub struct Outcome {
    pub passes: bool,
    pub result: serde_json::Value,
    pub dot: Option<String>,
    pub csv: Option<String>,
}

impl Outcome {
    pub fn pass(result: serde_json::Value) -> Self {
        Outcome { passes: true, result, dot: None, csv: None }
    }
}

fn run(args: &Args) -> CliResult<bool> {
    if args.budget == 0 {
        return Err(CliError::Usage("--budget must be positive".into()));
    }
    if args.threads == 0 {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    let outcome = commands::dispatch(args)?;
    let name = args.command.name();
    let hash = config_hash(name, args)?;
    let version = env!("CARGO_PKG_VERSION");
    let text = match args.format {
        Format::Json => {
            let doc = json!({
                "tool": "tangles",
                "version": version,
                "command": name,
                "config_hash": hash,
                "status": if outcome.passes { "pass" } else { "fail" },
                "result": outcome.result,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("values serialize"))
        }
        Format::Dot => {
            let dot = outcome
                .dot
                .ok_or_else(|| CliError::Usage(format!("`{name}` has no DOT output")))?;
            format!("// tangles {version} {name} config {hash}\n{dot}")
        }
        Format::Csv => outcome
            .csv
            .ok_or_else(|| CliError::Usage(format!("`{name}` has no CSV output")))?,
    };
    emit(args, &text)?;
    Ok(outcome.passes)
}

fn main() -> ExitCode {
    // Usage errors exit with 1 like every other error; 2 is reserved for
    // failing reports.
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            if args.format == Format::Json {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(1)
        }
    }
}
