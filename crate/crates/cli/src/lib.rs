//! Command-line front end for `anchorhom`: homology and Euler characteristic
//! reports, and a verification grid, all emitted as JSON.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod report;

pub use commands::{run, summary};
pub use report::{CliError, RunReport};

/// Environment variable that overrides the default enumeration budget.
pub const BUDGET_ENV: &str = "ANCHORHOM_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "anchorhom", version, about = "Homology and Euler characteristics of anchored configuration spaces on graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the chain complex on the cycle C_k and compute its integer homology.
    Homology(HomologyArgs),
    /// Euler characteristic of an anchored configuration space.
    Euler(EulerArgs),
    /// Run the verification grid.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct HomologyArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: usize,
    /// Support vertices as 1-based labels, comma separated. Defaults to all of Z_k.
    #[arg(long = "P", value_delimiter = ',')]
    pub support: Option<Vec<usize>>,
    /// Write the boundary matrices to this file, one nonzero entry per line.
    #[arg(long, value_name = "FILE")]
    pub dump_matrices: Option<PathBuf>,
    /// Maximum number of generators over all degrees.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["graph", "cycle"]))]
pub struct EulerArgs {
    /// Graph file: {"vertices", "edges", "anchors", "q"}, 0-based ids.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Use the cycle C_k with every vertex anchored.
    #[arg(long, value_name = "K")]
    pub cycle: Option<usize>,
    #[arg(long)]
    pub n: usize,
    /// Required with --cycle; overrides the file's q with --graph.
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long, value_enum, default_value = "formula")]
    pub method: report::MethodChoice,
    /// Maximum number of tuples the brute-force count may visit.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    pub kmax: usize,
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
    /// Caps both complex generators and brute-force tuples; larger cases are skipped.
    #[arg(long)]
    pub budget: Option<u64>,
}
