use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod params;

#[derive(Parser)]
#[command(
    name = "lrs",
    version,
    about = "Randomized decoding of LRS codes and work-factor bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sandwich bounds and the LP optimum per ell, as CSV.
    Bounds(SweepArgs),
    /// LP-optimal guessing distribution for one ell, as JSON.
    Lp(SingleArgs),
    /// Monte Carlo decoding experiment per ell, as CSV.
    Simulate(SimulateArgs),
    /// Decode a received word read from a file.
    Decode(DecodeArgs),
    /// Plant a random error, decode it and report.
    Roundtrip(RoundtripArgs),
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Base field size; a prime power.
    #[arg(long)]
    q: Option<u64>,
    /// Characteristic of the base field.
    #[arg(long)]
    p: Option<u64>,
    /// Base field is F_{p^r}.
    #[arg(long)]
    r: Option<usize>,
    /// Extension degree.
    #[arg(long)]
    m: Option<usize>,
    /// Set m = eta = n / ell.
    #[arg(long)]
    square_blocks: bool,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Target decoding radius.
    #[arg(long)]
    w: usize,
    /// Guessed support dimension.
    #[arg(long)]
    u: usize,
    /// Simplex pivot budget.
    #[arg(long, default_value_t = 200_000)]
    pivot_budget: usize,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistChoice {
    /// LP-optimal distribution.
    Lp,
    Uniform,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetChoice {
    Any,
    Planted,
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Comma-separated list of block counts.
    #[arg(long)]
    ell: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Clone)]
struct SingleArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    ell: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration cap per decode.
    #[arg(long, default_value_t = 10_000)]
    cap: u64,
    #[arg(long, value_enum, default_value_t = DistChoice::Lp)]
    dist: DistChoice,
}

#[derive(Args, Clone)]
struct SimulateArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Plant errors instead of drawing uniform received words.
    #[arg(long)]
    planted: bool,
    /// Error block ranks in planted mode; defaults to the worst case.
    #[arg(long)]
    error_composition: Option<String>,
    #[arg(long, value_enum, default_value_t = TargetChoice::Any)]
    target: TargetChoice,
}

#[derive(Args, Clone)]
struct DecodeArgs {
    #[command(flatten)]
    single: SingleArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Received word, one block per line.
    #[arg(long)]
    input: PathBuf,
    /// Also write the decoded codeword in the input format.
    #[arg(long)]
    codeword_out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RoundtripArgs {
    #[command(flatten)]
    single: SingleArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Error block ranks; defaults to the worst case.
    #[arg(long)]
    error_composition: Option<String>,
    /// Write the received word here.
    #[arg(long)]
    received_out: Option<PathBuf>,
    /// Write the planted codeword here.
    #[arg(long)]
    codeword_out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Parse(String),
    CapExhausted(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Parse(_) => 3,
            CliError::CapExhausted(_) => 4,
        }
    }

    fn line(&self) -> String {
        let (kind, msg) = match self {
            CliError::Io(m) => ("io", m),
            CliError::Validation(m) => ("validation", m),
            CliError::Parse(m) => ("parse", m),
            CliError::CapExhausted(m) => ("cap_exhausted", m),
        };
        format!("error: {kind}: {}", msg.replace('\n', " "))
    }
}

impl From<lrs_core::Error> for CliError {
    fn from(e: lrs_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bounds(a) => commands::bounds(a),
        Command::Lp(a) => commands::lp(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Decode(a) => commands::decode(a),
        Command::Roundtrip(a) => commands::roundtrip(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.code())
        }
    }
}
