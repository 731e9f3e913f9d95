//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "sumset", version, about = "Finite-window sumset constructions with exact certificates")]
pub struct Cli {
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true, env = "SUMSET_THREADS")]
    pub threads: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a set and write it in the set file format.
    Gen {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = FileFormat::List)]
        format: FileFormat,
    },
    /// Prefix and Banach density estimates.
    Density {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: DensityArgs,
    },
    /// Smallest block length whose block set is nearly full.
    Fatten {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: FattenArgs,
    },
    /// Search for `B + C ⊆ A`.
    FindBc {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: FindBcArgs,
    },
    /// Search for `B + C ⊆ A ∪ (A + k)`.
    OneShift {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: OneShiftArgs,
    },
    /// Autocorrelation and Cesàro diagnostics.
    Mixing {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: MixingArgs,
    },
    /// Re-check a certificate against a set.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: VerifyArgs,
    },
    /// Run a pinned-seed test battery.
    Harness {
        #[command(flatten)]
        params: HarnessArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Density { .. } => "density",
            Command::Fatten { .. } => "fatten",
            Command::FindBc { .. } => "find-bc",
            Command::OneShift { .. } => "one-shift",
            Command::Mixing { .. } => "mixing",
            Command::Verify { .. } => "verify",
            Command::Harness { .. } => "harness",
        }
    }
}

/// Where the set comes from: a file, or a generator.
#[derive(Clone, Debug, Args, Serialize)]
pub struct InputArgs {
    /// Set file to read.
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,

    /// Generator, e.g. `bernoulli:0.8`, `periodic:4:1,3`, `blocks:10:5`.
    #[arg(long = "gen")]
    pub gen: Option<String>,

    /// Window length for generators.
    #[arg(long = "n", default_value_t = 100_000)]
    pub window_len: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Accept duplicate and unordered members in set files.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FileFormat {
    List,
    Rle,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DensityArgs {
    /// Comma-separated ascending lengths; defaults to halvings of N.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Vec<usize>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FattenArgs {
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Block lengths to try, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub n_schedule: Vec<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    HighDensity,
    Pseudorandom,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FindBcArgs {
    #[arg(long, default_value_t = 10)]
    pub size: usize,
    #[arg(long, default_value_t = 8)]
    pub candidates: usize,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Length of the D sequence before thinning.
    #[arg(long)]
    pub d_len: Option<usize>,
    #[arg(long, value_enum, default_value_t = Pipeline::HighDensity)]
    pub pipeline: Pipeline,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct OneShiftArgs {
    #[arg(long, default_value_t = 5)]
    pub size: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Cyclic,
    Truncated,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct MixingArgs {
    #[arg(long, default_value_t = 1000)]
    pub n_max: usize,
    /// Repeatable.
    #[arg(long = "eps")]
    pub eps: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Cyclic)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0.02)]
    pub theta_mix: f64,
    #[arg(long, default_value_t = 0.1)]
    pub theta_str: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Certificate JSON, either a full report or a bare certificate.
    #[arg(long)]
    pub certificate: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Acceptance,
    Oracle,
    Quick,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct HarnessArgs {
    #[arg(long, value_enum, default_value_t = Suite::Quick)]
    pub suite: Suite,
}
