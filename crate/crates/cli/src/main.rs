mod commands;
mod input;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use flatveech::Error;

#[derive(Parser, Debug)]
#[command(name = "flatveech", version, about = "Billiards, flat surfaces and Veech groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Interior angles, rationality and the rotation group of a table.
    PolygonAnalyze { input: PathBuf },
    /// Generalized diagonals up to the length bound.
    Diagonals { input: PathBuf },
    /// Katok-Zemljakov surface of a table (truncated to `depth` for irrational tables).
    Unfold { input: PathBuf },
    /// Checklist of the SO(2) argument for an irrational table.
    Veech { input: PathBuf },
    /// Veech-group verdict for a stable differential with polar nodes.
    StableClassify { input: PathBuf },
    /// Search for an unbounded table whose first `depth` chain angles are free of resonances.
    UnboundedGenerate {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::PolygonAnalyze { .. } => "polygon-analyze",
            Command::Diagonals { .. } => "diagonals",
            Command::Unfold { .. } => "unfold",
            Command::Veech { .. } => "veech",
            Command::StableClassify { .. } => "stable-classify",
            Command::UnboundedGenerate { .. } => "unbounded-generate",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Working precision of ball arithmetic, in bits.
    #[arg(long, global = true, env = "FLATVEECH_PRECISION", default_value_t = 256,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub precision_bits: u32,
    /// Largest coefficient in integer-relation searches.
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_coeff: u64,
    /// Length bound for diagonal and saddle-connection censuses, in scalar syntax.
    #[arg(long, global = true)]
    pub length_bound: Option<String>,
    /// Truncation depth for unfoldings and generated tables.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "FLATVEECH_THREADS", default_value_t = 0)]
    pub thread_count: usize,
    /// Largest number of corridor nodes a census may explore.
    #[arg(long, global = true, default_value_t = 2_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub node_budget: u64,
    /// Output file; with `--format both` the SVG goes next to it with an `.svg` extension.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::InvalidPolygon(_)
        | Error::InvalidStableSurface(_)
        | Error::DegenerateVertex(_)
        | Error::SpacingViolated { .. }
        | Error::InconsistentAngles(_) => 2,
        Error::PrecisionInsufficient(_) => 3,
        Error::BudgetExceeded { .. }
        | Error::SearchExhausted { .. }
        | Error::NoDiagonalFound { .. }
        | Error::Inconclusive(_) => 4,
        Error::ExactModeOnIrrational
        | Error::TruncatedSurface(_)
        | Error::ConePointInInterior
        | Error::RationalAngle
        | Error::NoPolarNodes
        | Error::NotIrreducible(_)
        | Error::NotInN(_)
        | Error::NotEqualsNSurface(_) => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.config.thread_count > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.config.thread_count).build_global();
    }
    ExitCode::from(commands::run(&cli))
}
