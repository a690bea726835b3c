use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const CAP_ENV: &str = "GHZ_DECAY_DENSE_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "ghz-decay",
    version,
    about = "Negativity decay of generalized GHZ states under local qudit noise",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Negativity of one state across split sizes and channel strengths.
    Negativity(NegativityArgs),
    /// Critical channel strength: vanishing point or epsilon threshold.
    Critical(CriticalArgs),
    /// Critical strengths or negativity curves over a (d, N) grid.
    Sweep(SweepArgs),
    /// Cross-check the closed forms against dense density-matrix evolution.
    Verify(VerifyArgs),
    /// Exact critical strengths next to their large-N and large-d limits.
    Asymptotes(AsymptoteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    Depolarizing,
    PhaseDamping,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    PBalanced,
    PLeastBalanced,
    PEpsilon,
    NegativityCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    /// d in {2, 3}, N in {2, 3, 4}, equal and 20 random states, both channels.
    Default,
    /// d in {2, 3}, N in {2, 4}, equal amplitudes.
    Quick,
    /// One d = 2, N = 10 instance.
    Large,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Significant digits of emitted numbers, 6 to 17.
    #[arg(long, default_value_t = 12)]
    pub precision: usize,
    /// Omit the timestamp (and timings) so reruns are byte-identical.
    #[arg(long)]
    pub deterministic: bool,
    /// Also write a gnuplot script that plots the CSV written to --out.
    #[arg(long, value_name = "PATH")]
    pub plot_script: Option<PathBuf>,
    /// JSON file of flag values, keyed by long flag name.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Local dimension; inferred from the amplitudes when omitted.
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of qudits.
    #[arg(long = "N", value_name = "N")]
    pub qudits: usize,
    /// Equal amplitudes 1/sqrt(d).
    #[arg(long, group = "source")]
    pub equal: bool,
    /// Complex amplitudes as `re,im;re,im;...`.
    #[arg(
        long,
        group = "source",
        value_name = "LIST",
        allow_hyphen_values = true
    )]
    pub alphas: Option<String>,
    /// JSON array of [re, im] pairs.
    #[arg(long, group = "source", value_name = "PATH")]
    pub alphas_file: Option<PathBuf>,
    /// Real amplitudes as `m0,m1,...`, phases zero.
    #[arg(long, group = "source", value_name = "LIST")]
    pub magnitudes: Option<String>,
    #[arg(long, value_enum, default_value = "depolarizing")]
    pub channel: Channel,
}

#[derive(Debug, Args)]
pub struct NegativityArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Channel strength.
    #[arg(long, conflicts_with = "p_grid")]
    pub p: Option<f64>,
    /// Strengths as `a,b,...` or `start:stop:step`.
    #[arg(long, value_name = "GRID")]
    pub p_grid: Option<String>,
    /// Split size; every size 1..N-1 when omitted.
    #[arg(long, conflicts_with = "subset")]
    pub n: Option<usize>,
    /// Transposed sites as `s1,s2,...` (0-based).
    #[arg(long, value_name = "SITES")]
    pub subset: Option<String>,
    /// Add per-pair contributions.
    #[arg(long)]
    pub pairs: bool,
    /// Add the dense-evolution value.
    #[arg(long)]
    pub oracle: bool,
    /// Largest dense dimension d^N the oracle may build.
    #[arg(long, env = CAP_ENV)]
    pub cap: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Vanishing point of the most balanced split (default).
    #[arg(long, group = "quantity")]
    pub balanced: bool,
    /// Vanishing point of the (N-n)|n split.
    #[arg(long, group = "quantity", value_name = "n")]
    pub partition: Option<usize>,
    /// Strength where the dominant block eigenvalue has decayed to this fraction.
    #[arg(long, group = "quantity", value_name = "EPS")]
    pub epsilon: Option<f64>,
    /// Split size for --epsilon; N/2 rounded down when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Add one row per level pair.
    #[arg(long)]
    pub pairs: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "p-balanced")]
    pub quantity: QuantityArg,
    /// Dimensions as `a,b,...` or `start:stop`, e.g. `2:50`.
    #[arg(long, default_value = "2:50")]
    pub d: String,
    /// Qudit counts, same syntax as --d.
    #[arg(long = "N", value_name = "LIST", default_value = "4,6,8")]
    pub qudits: String,
    #[arg(long, value_enum, default_value = "depolarizing")]
    pub channel: Channel,
    /// Equal amplitudes 1/sqrt(d) (default).
    #[arg(long, group = "source")]
    pub equal: bool,
    /// Amplitudes `re,im;...` for a single d.
    #[arg(
        long,
        group = "source",
        value_name = "LIST",
        allow_hyphen_values = true
    )]
    pub alphas: Option<String>,
    /// JSON: an array of [re, im] pairs, or an object mapping d to one.
    #[arg(long, group = "source", value_name = "PATH")]
    pub alphas_file: Option<PathBuf>,
    /// Real amplitudes `m0,m1,...` for a single d.
    #[arg(long, group = "source", value_name = "LIST")]
    pub magnitudes: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Strengths for negativity-curve, as `a,b,...` or `start:stop:step`.
    #[arg(long, value_name = "GRID", default_value = "0:1:0.01")]
    pub p_grid: String,
    /// Split size for negativity-curve; N/2 rounded down when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "default")]
    pub suite: SuiteArg,
    /// Largest dense dimension d^N an instance may build.
    #[arg(long, env = CAP_ENV)]
    pub cap: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AsymptoteArgs {
    #[arg(long, default_value = "2,3,5")]
    pub d: String,
    #[arg(long = "N", value_name = "LIST", default_value = "4,8,16,32,64,200")]
    pub qudits: String,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
