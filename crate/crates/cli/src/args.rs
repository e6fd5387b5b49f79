use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use raag_core::CompatMode;

/// Where to read the graph from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    File(PathBuf),
    Fixture(String),
}

impl FromStr for GraphSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(path) = s.strip_prefix("file:") {
            Ok(GraphSource::File(PathBuf::from(path)))
        } else if let Some(name) = s.strip_prefix("fixture:") {
            Ok(GraphSource::Fixture(name.to_string()))
        } else {
            Err(format!("expected `file:PATH` or `fixture:NAME`, got `{s}`"))
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "raag", version, about = "Whitehead partitions and abelian ranks of untwisted RAAG automorphisms")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Input graph: `file:PATH` or `fixture:NAME`, e.g. `fixture:DIAMONDS(2)`.
    #[arg(long, global = true)]
    pub graph: Option<GraphSource>,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Compatibility used by rank searches.
    #[arg(long, global = true, default_value = "strong")]
    pub mode: CompatMode,
    /// Longest conjugator accepted by innerness tests.
    #[arg(long, global = true, default_value_t = 6)]
    pub bound: usize,
    /// Node budget for clique searches.
    #[arg(long, global = true, default_value_t = raag_core::DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Include wall-clock times in the output.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertex relations, inseparable sets and barbedness.
    Analyze,
    /// List the Whitehead partitions.
    Partitions(PartitionsArgs),
    /// Largest compatible collection based in a vertex set.
    Rank(RankArgs),
    /// Build and verify an explicit abelian subgroup of rank M(L).
    Abelian(AbelianArgs),
    /// Compare the commutation criterion with direct computation.
    Commute(CommuteArgs),
    /// Star complex census and the free-face collapse.
    Spine(SpineArgs),
    /// Run a built-in verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct PartitionsArgs {
    /// Only partitions based in these vertices (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub within: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// `V`, `L` or a comma-separated list of vertex names.
    #[arg(long, default_value = "V")]
    pub set: String,
    /// Print the maximizing collection.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Args)]
pub struct AbelianArgs {
    /// Exponent bound for the independence check.
    #[arg(long, default_value_t = 2)]
    pub exponent: i32,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("pair").args(["left", "all"]).required(true))]
pub struct CommuteArgs {
    /// First partition, `{P | P* | link}`.
    #[arg(long, requires_all = ["left_mult", "right", "right_mult"])]
    pub left: Option<String>,
    #[arg(long)]
    pub left_mult: Option<String>,
    /// Second partition.
    #[arg(long)]
    pub right: Option<String>,
    #[arg(long)]
    pub right_mult: Option<String>,
    /// Check every pair of Whitehead automorphisms of the graph.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct SpineArgs {
    /// Count cubes by dimension.
    #[arg(long)]
    pub census: bool,
    /// Run the free-face collapse pass.
    #[arg(long)]
    pub collapse: bool,
    /// Emit the Hasse diagram of collections in DOT.
    #[arg(long)]
    pub dot: bool,
    /// Cap on the number of collections in the star.
    #[arg(long, default_value_t = raag_core::spine::DEFAULT_STAR_BUDGET)]
    pub max_collections: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "paper")]
    pub suite: Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// All worked examples and property checks.
    Paper,
}
