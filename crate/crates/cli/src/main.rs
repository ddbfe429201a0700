//! `qna`: generate networks, evolve them to a snapshot, reconstruct the
//! realized code sets and classify network activity.
//!
//! Reports are a single JSON object on stdout; diagnostics go to stderr.
//! Exit codes: 0 success, 2 bad input, 3 numeric failure, 4 backend
//! disagreement.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

#[derive(Parser, Debug)]
#[command(
    name = "qna",
    version,
    about = "Quantum classification of threshold-network activity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a seeded random network as JSON.
    Gen(GenArgs),
    /// Evolve a network and emit the snapshot of quantized running sums.
    Evolve(EvolveArgs),
    /// Reconstruct the realized code sets of a snapshot.
    Sets(SetsArgs),
    /// Classify a snapshot as quiescent, epileptic or sustaining.
    Classify(ClassifyArgs),
    /// Size of the firing-pattern space and query-cost comparison.
    Estimate(EstimateArgs),
}

#[derive(Args, Debug)]
struct RangeArgs {
    /// Lower end of the normalization range.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    range_min: f64,
    /// Upper end of the normalization range.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    range_max: f64,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    /// Probability that any ordered node pair carries an edge.
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    weight_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    weight_max: f64,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long, env = "QNA_SEED", default_value_t = 0)]
    seed: u64,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InitState {
    /// Each node fires independently with probability --fire-prob.
    Random,
    All,
    None,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    network: PathBuf,
    #[arg(long, default_value_t = 1)]
    steps: u64,
    #[arg(long, value_enum, default_value_t = InitState::Random)]
    init: InitState,
    #[arg(long, default_value_t = 0.5)]
    fire_prob: f64,
    /// Quantization steps above zero.
    #[arg(long, default_value_t = 100)]
    scale: u32,
    #[arg(long, env = "QNA_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SetsBackend {
    Classical,
    Grover,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroverModeArg {
    List,
    Domain,
}

#[derive(Args, Debug)]
struct SetsArgs {
    snapshot: PathBuf,
    #[arg(long, value_enum, default_value_t = SetsBackend::Classical)]
    backend: SetsBackend,
    #[arg(long, value_enum, default_value_t = GroverModeArg::List)]
    grover_mode: GroverModeArg,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Fixed Grover iteration count instead of the multiplicity schedule.
    #[arg(long)]
    iterations: Option<usize>,
    /// Schedule iterations as if every target occurred once.
    #[arg(long)]
    worst_case: bool,
    #[arg(long, env = "QNA_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassifyBackend {
    Quantum,
    Classical,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    snapshot: PathBuf,
    /// Firing threshold in the normalization range.
    #[arg(long, allow_negative_numbers = true)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = ClassifyBackend::Quantum)]
    backend: ClassifyBackend,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, default_value_t = qna_core::djclassifier::DEFAULT_SHOTS)]
    shots: usize,
    #[arg(long, env = "QNA_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Number of neurons N.
    #[arg(long)]
    population: u64,
    /// Number simultaneously firing, k.
    #[arg(long)]
    active: u64,
    /// Code width n.
    #[arg(long, env = "QNA_BITS", default_value_t = 7)]
    bits: u32,
    /// Snapshot length M.
    #[arg(long)]
    list_size: u64,
    #[arg(long, default_value_t = 3)]
    reps: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Evolve(a) => commands::evolve(a),
        Command::Sets(a) => commands::sets(a),
        Command::Classify(a) => commands::classify(a),
        Command::Estimate(a) => commands::estimate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qna: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
