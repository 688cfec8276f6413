use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ppestim",
    version,
    about = "Distributed proximal-point state estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a topology and write it as an edge list.
    Gen(GenArgs),
    /// Spectra of the normalized Laplacian, F₀ and F_ρ with bounds.
    Spectral(SpectralArgs),
    /// Optimal penalty and predicted rates.
    RhoOpt(GraphArg),
    /// Run the estimation scheme and report its performance.
    Estimate(EstimateArgs),
    /// Benchmark a suite of topologies.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TopologyName {
    Complete,
    Circulant,
    Star,
    SmallWorld,
    BinaryTree,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub topology: TopologyName,
    /// Vertex count; for small-world, the first clique size.
    pub n: usize,
    /// Circulant offsets (comma separated) or the second small-world clique size.
    pub params: Option<String>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Edge-list file, or a generator spec such as `star:36`, `circulant:36:1,2`,
    /// `small-world:9:27`, `binary-tree:32`, `complete:36`.
    #[arg(short, long)]
    pub graph: String,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Penalty for F_ρ; defaults to ρ⋆.
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Fixed,
    Optimal,
    Sigma0,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 20)]
    pub rounds: usize,
    #[arg(long, default_value_t = 2)]
    pub kneg: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Half-width `a` of the uniform noise.
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
    /// `linear`, `linear:<step>`, or comma-separated values.
    #[arg(long, default_value = "linear")]
    pub truth: String,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(short, long)]
    pub graph: String,
    /// Output prefix; files `<prefix>.<scheme>.trajectory.csv` and friends.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Policy::Optimal)]
    pub policy: Policy,
    /// Penalty for the fixed policy.
    #[arg(long)]
    pub rho: Option<f64>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Table1,
    None,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Suite::Table1)]
    pub suite: Suite,
    /// Extra edge-list files, one row each.
    #[arg(short, long = "graph")]
    pub graphs: Vec<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub run: RunArgs,
}
