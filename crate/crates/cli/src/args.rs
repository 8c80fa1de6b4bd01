use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mmwpl", version, about = "Probabilistic omnidirectional mmWave path loss toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ray-trace a LOS probability curve around one transmitter.
    LosProb(LosProbArgs),
    /// Fit the breakpoint/decay LOS model to one or more curves.
    FitPlos(FitPlosArgs),
    /// Tabulate the hybrid mean path loss and shadow factor versus distance.
    Pathloss(PathlossArgs),
    /// Fit a close-in or floating-intercept model to measured samples.
    Fit(FitArgs),
    /// Outage and coverage probability versus distance.
    Outage(OutageArgs),
    /// Draw seeded synthetic path loss samples from a preset.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 10.0)]
    pub rmin: f64,
    #[arg(long, default_value_t = 200.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutArg {
    /// Output file, written atomically. Standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LosProbArgs {
    /// Building database (JSON).
    #[arg(long)]
    pub db: PathBuf,
    /// Transmitter as `x,y,z` in meters, or a site id from the database.
    /// Defaults to the database's only site.
    #[arg(long, allow_hyphen_values = true)]
    pub tx: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = 1.5)]
    pub rx_height: f64,
    /// Divide by every circle position instead of exterior positions only.
    #[arg(long)]
    pub all_points: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct FitPlosArgs {
    /// Curve CSV files (`radius_m,p_los,valid`).
    #[arg(required = true)]
    pub curves: Vec<PathBuf>,
    /// Average the curves before fitting; required with several inputs.
    #[arg(long)]
    pub mean: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NlosArg {
    CloseIn,
    Floating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    CloseIn,
    Floating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConditionArg {
    #[value(name = "LOS")]
    Los,
    #[value(name = "NLOS")]
    Nlos,
}

/// Hybrid model selection: a preset, optionally overridden field by field.
#[derive(Debug, Clone, Args)]
pub struct HybridArgs {
    /// `28GHz-NYC` or `73GHz-NYC`. Without a preset every model flag is required.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum, default_value = "close-in")]
    pub nlos: NlosArg,
    /// Breakpoint distance in meters.
    #[arg(long, default_value_t = 27.0)]
    pub dbp: f64,
    /// Decay distance in meters.
    #[arg(long, default_value_t = 71.0)]
    pub alpha: f64,
    /// Use the unsquared (WINNER) LOS probability.
    #[arg(long)]
    pub winner: bool,
    #[arg(long)]
    pub frequency: Option<f64>,
    #[arg(long)]
    pub n_los: Option<f64>,
    #[arg(long)]
    pub sigma_los: Option<f64>,
    #[arg(long)]
    pub n_nlos: Option<f64>,
    #[arg(long)]
    pub sigma_nlos: Option<f64>,
    #[arg(long)]
    pub fi_intercept: Option<f64>,
    #[arg(long)]
    pub fi_slope: Option<f64>,
    #[arg(long)]
    pub fi_sigma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PathlossArgs {
    #[command(flatten)]
    pub model: HybridArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Samples CSV (`d_m,pl_db,condition`).
    #[arg(long)]
    pub samples: PathBuf,
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Only samples with this condition are fitted.
    #[arg(long, value_enum)]
    pub condition: ConditionArg,
    /// Carrier frequency in Hz, needed by the close-in model.
    #[arg(long)]
    pub frequency: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct OutageArgs {
    #[command(flatten)]
    pub model: HybridArgs,
    /// Maximum tolerable path loss in dB.
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Also estimate outage from this many shadowed draws per distance.
    #[arg(long, requires = "seed")]
    pub monte_carlo: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub preset: String,
    #[arg(long, value_enum)]
    pub condition: ConditionArg,
    /// NLOS model used for NLOS samples.
    #[arg(long, value_enum, default_value = "close-in")]
    pub nlos: NlosArg,
    #[arg(long, default_value_t = 500)]
    pub count: usize,
    /// Distances are drawn uniformly from `[dmin, dmax]` meters.
    #[arg(long, default_value_t = 30.0)]
    pub dmin: f64,
    #[arg(long, default_value_t = 200.0)]
    pub dmax: f64,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArg,
}
