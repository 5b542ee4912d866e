//! `gm`: tables of minimum estimation error, optimal states and protocol
//! simulations as CSV or JSON.

mod commands;
mod record;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use record::{OutputRecord, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(name = "gm", version, about = "Minimum estimation error for group-action estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
    /// Worker threads for sweeps and trials (default: all cores).
    #[arg(long, env = "GM_THREADS", global = true)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// κ(E) with s_E and the small- and large-E expansions over an energy grid.
    Kappa(commands::KappaArgs),
    /// Minimum error when the labels are cut off at n, over a grid of n.
    Cut(commands::CutArgs),
    /// Optimal state for one energy budget, cut or interval.
    State(commands::StateArgs),
    /// Monte-Carlo run of the i.i.d. maximum-likelihood protocol.
    Simulate(commands::SimulateArgs),
    /// Exact spin distribution of n qubits and its distance to the limit law.
    Schur(commands::SchurArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Kappa(_) => "kappa",
            Self::Cut(_) => "cut",
            Self::State(_) => "state",
            Self::Simulate(_) => "simulate",
            Self::Schur(_) => "schur",
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<OutputRecord> {
    match &cli.command {
        Command::Kappa(a) => commands::kappa(a),
        Command::Cut(a) => commands::cut(a),
        Command::State(a) => commands::state(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Schur(a) => commands::schur(a),
    }
}

fn emit(record: &OutputRecord, output: &OutputArgs) -> anyhow::Result<()> {
    let mut sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    match output.format {
        Format::Csv => record.write_csv(&mut sink)?,
        Format::Json => record.write_json(&mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

fn report_error(command: &str, message: &str) {
    let body = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": message,
    });
    eprintln!("{body}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            report_error(command, &e.to_string());
            return ExitCode::from(2);
        }
    }
    let record = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            report_error(command, &format!("{e:#}"));
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&record, &cli.output) {
        let closed = e
            .downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe);
        if closed {
            return ExitCode::SUCCESS;
        }
        report_error(command, &format!("{e:#}"));
        return ExitCode::from(2);
    }
    for row in &record.errors {
        let body = json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "input": row.input,
            "error": row.message,
        });
        eprintln!("{body}");
    }
    if record.errors.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
