use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bosonic-mac",
    version,
    about = "Rates, regions and limit checks for the two-user thermal lossy bosonic MAC"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Values given here override the config
/// file, which overrides the built-in defaults.
#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// Alice's beamsplitter transmissivity
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eta1: Option<f64>,
    /// Environment beamsplitter transmissivity
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eta2: Option<f64>,
    /// Mean thermal photon number of the environment
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub nt: Option<f64>,
    /// Alice's mean photon budget
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub na: Option<f64>,
    /// Bob's mean photon budget
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub nb: Option<f64>,
    /// Alice's squeezing parameter
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub ra: Option<f64>,
    /// Bob's squeezing parameter
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub rb: Option<f64>,
    /// Fraction of Alice's budget spent on squeezing (alternative to --ra)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub pa: Option<f64>,
    /// Fraction of Bob's budget spent on squeezing (alternative to --rb)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub pb: Option<f64>,
    /// Grid points per axis
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// RNG seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write data here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file using the flag names as keys
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum rates, outer bounds and receiver rates for one encoding
    Rates,
    /// Individual rates over a grid of squeezing fractions
    Surface,
    /// Convex rate region, receiver pentagons and outer-bound box
    Region(RegionArgs),
    /// Numerical limit probes
    Asymptotics(AsymptoticsArgs),
    /// Search for the best squeezing fractions
    Optimize(OptimizeArgs),
    /// Oracle, Monte-Carlo, continuity and containment checks
    Verify(VerifyArgs),
}

#[derive(Debug, Default, Args)]
pub struct RegionArgs {
    /// Comma-separated `r_A:r_B` pairs, e.g. `0:0,0:3`
    #[arg(long, allow_hyphen_values = true)]
    pub encodings: Option<String>,
}

#[derive(Debug, Default, Args)]
pub struct AsymptoticsArgs {
    /// 1, hom-half, 2, receiver-gap or all
    #[arg(long)]
    pub lemma: Option<String>,
    /// Restrict lemma 2 to one case (1, 2 or 3)
    #[arg(long)]
    pub case: Option<u8>,
    /// Fraction of the branch-1 squeezing ceiling used by Bob in case 3
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Case 3 scale of Alice's budget
    #[arg(long)]
    pub scale_a: Option<f64>,
    /// Case 3 scale of Bob's budget
    #[arg(long)]
    pub scale_b: Option<f64>,
    /// Case 3 displacement fraction of Alice's budget
    #[arg(long)]
    pub displacement_a: Option<f64>,
    /// alice or bob (lemma 1)
    #[arg(long)]
    pub user: Option<String>,
}

#[derive(Debug, Default, Args)]
pub struct OptimizeArgs {
    /// ra, rb, sum, or global (budget-split scan)
    #[arg(long)]
    pub objective: Option<String>,
    /// Global photon budget for the split scan
    #[arg(long)]
    pub ns: Option<f64>,
    /// Number of budget splits in the scan
    #[arg(long)]
    pub splits: Option<usize>,
}

#[derive(Debug, Default, Args)]
pub struct VerifyArgs {
    /// Random draws for the oracle, continuity and containment checks
    #[arg(long)]
    pub draws: Option<usize>,
    /// Monte-Carlo samples
    #[arg(long)]
    pub samples: Option<usize>,
    /// Relative tolerance of the covariance oracle check
    #[arg(long)]
    pub tolerance: Option<f64>,
}
