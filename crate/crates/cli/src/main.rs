//! Command-line front end: classify a mask, list its balanced moves,
//! enumerate and connect fibers, and run the conditional exact test.
//!
//! Results go to stdout as JSON (CSV where `--format csv` applies);
//! diagnostics go to stderr. Exit codes: 0 success — including a certified
//! disconnection, which is a definite answer; 2 invalid input; 3 a
//! resource bound was hit before an answer was reached.

use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use subtable_sum::basis::generate_basic_moves;
use subtable_sum::connector::{assemble_path, connect, ConnectorConfig};
use subtable_sum::error::Error;
use subtable_sum::fiber::{components, construct_witness, enumerate_fiber, verify_bounded};
use subtable_sum::io::{
    basis_out, parse_problem, parse_table_csv, table_to_csv, ClassifyOut, ConnectOut, FiberOut,
    Problem, VerifyOut, WitnessReportOut,
};
use subtable_sum::mcmc::{exact_test, WalkConfig};
use subtable_sum::pattern::classify;
use subtable_sum::table::Table;

#[derive(Parser)]
#[command(
    name = "subtable-sum",
    version,
    about = "Markov bases for two-way tables with a fixed subtable sum",
    after_help = "All row and column indices in files and output are 1-based."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the balanced degree-two moves connect every fiber
    Classify(InputArg),
    /// List the balanced basic moves of the mask
    Basis {
        #[command(flatten)]
        input: InputArg,
        /// Output format
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Enumerate the fiber of the observed table
    Fiber {
        #[command(flatten)]
        input: InputArg,
        /// Output format
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Construct a small fiber the balanced moves leave disconnected
    Witness(InputArg),
    /// Check connectivity of every fiber with grand total up to a bound
    Verify {
        #[command(flatten)]
        input: InputArg,
        /// Largest grand total to enumerate
        #[arg(long, default_value_t = 6)]
        max_total: i64,
    },
    /// Find an explicit move path between two tables of one fiber
    Connect {
        #[command(flatten)]
        input: InputArg,
        /// CSV file with the start table
        #[arg(long)]
        x: PathBuf,
        /// CSV file with the goal table
        #[arg(long)]
        y: PathBuf,
        /// Longest step sequence per reduction round
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Monte Carlo conditional exact test from the observed table
    Test {
        #[command(flatten)]
        input: InputArg,
        /// Total walk steps
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        /// Steps discarded before sampling starts
        #[arg(long, default_value_t = 1_000)]
        burn_in: u64,
        /// Distance between consecutive samples
        #[arg(long = "thin", default_value_t = 10)]
        thinning: u64,
        /// Random seed; identical seeds reproduce the trajectory exactly
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct InputArg {
    /// JSON problem file: {"rows", "cols", "table"?, "subtable"}
    #[arg(short = 'i', long)]
    input: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Default, PartialEq, Eq)]
enum Format {
    /// Machine-readable JSON
    #[default]
    Json,
    /// Comma-separated tables or moves
    Csv,
}

/// `witness` output: flattened report when a witness exists.
#[derive(Serialize)]
struct WitnessCli {
    exists: bool,
    #[serde(flatten)]
    report: Option<WitnessReportOut>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(stdout) => {
            // A downstream consumer may close the pipe early (`… | head`);
            // that is not an error worth reporting, let alone a panic.
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{stdout}").and_then(|()| out.flush()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::WorkBoundExceeded { .. }
                | Error::NotConnectedAtDepth { .. }
                | Error::NoReductionFound { .. } => 3,
                _ => 2,
            })
        }
    }
}

fn run(command: Command) -> Result<String, Error> {
    match command {
        Command::Classify(input) => {
            let problem = load_problem(&input.input)?;
            let classification = classify(&problem.mask)?;
            to_json(&ClassifyOut::from(&classification))
        }
        Command::Basis { input, format } => {
            let problem = load_problem(&input.input)?;
            let moves = generate_basic_moves(&problem.mask)?;
            let out = basis_out(&moves);
            match format {
                Format::Json => to_json(&out),
                Format::Csv => Ok(out
                    .iter()
                    .map(|m| format!("{},{},{},{}", m.rows[0], m.rows[1], m.cols[0], m.cols[1]))
                    .collect::<Vec<_>>()
                    .join("\n")),
            }
        }
        Command::Fiber { input, format } => {
            let problem = load_problem(&input.input)?;
            let table = require_table(&problem)?;
            let marginals = table.marginals(&problem.mask)?;
            let fiber = enumerate_fiber(&marginals, &problem.mask)?;
            match format {
                Format::Json => to_json(&FiberOut::from(&fiber)),
                Format::Csv => Ok(fiber
                    .elements()
                    .iter()
                    .map(table_to_csv)
                    .collect::<Vec<_>>()
                    .join("\n")),
            }
        }
        Command::Witness(input) => {
            let problem = load_problem(&input.input)?;
            let out = match construct_witness(&problem.mask)? {
                Some((marginals, fiber)) => {
                    let moves = generate_basic_moves(&problem.mask)?;
                    let graph = components(&fiber, &moves.to_move_arrays());
                    WitnessCli {
                        exists: true,
                        report: Some(WitnessReportOut::new(&marginals, &fiber, &graph)),
                    }
                }
                None => WitnessCli {
                    exists: false,
                    report: None,
                },
            };
            to_json(&out)
        }
        Command::Verify { input, max_total } => {
            let problem = load_problem(&input.input)?;
            let moves = generate_basic_moves(&problem.mask)?;
            let report = verify_bounded(&problem.mask, &moves, max_total)?;
            to_json(&VerifyOut::from(&report))
        }
        Command::Connect { input, x, y, depth } => {
            let problem = load_problem(&input.input)?;
            let x = load_table_csv(&x)?;
            let y = load_table_csv(&y)?;
            let moves = generate_basic_moves(&problem.mask)?;
            let config = ConnectorConfig {
                max_sequence_depth: depth,
                ..ConnectorConfig::default()
            };
            let out = match connect(&x, &y, &problem.mask, &moves, &config) {
                Ok(steps) => ConnectOut::connected(&steps, &assemble_path(&steps)),
                Err(Error::Disconnected(cert)) => ConnectOut::disconnected(&cert),
                Err(other) => return Err(other),
            };
            to_json(&out)
        }
        Command::Test {
            input,
            steps,
            burn_in,
            thinning,
            seed,
        } => {
            let problem = load_problem(&input.input)?;
            let observed = require_table(&problem)?;
            let config = WalkConfig {
                steps,
                burn_in,
                thinning,
                seed,
            };
            let report = exact_test(observed, &problem.mask, &config)?;
            to_json(&report)
        }
    }
}

fn load_problem(path: &Path) -> Result<Problem, Error> {
    parse_problem(&read(path)?)
}

fn load_table_csv(path: &Path) -> Result<Table, Error> {
    parse_table_csv(&read(path)?)
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

fn require_table(problem: &Problem) -> Result<&Table, Error> {
    problem
        .table
        .as_ref()
        .ok_or(Error::Malformed("the problem file has no \"table\"".into()))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::Malformed(format!("serializing output: {e}")))
}
