use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "nprule",
    version,
    about = "Optimal randomized decision rules under Neyman-Pearson style constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub overrides: Overrides,

    /// Output format; defaults to csv for table and sweep, json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Overrides {
    /// Absolute and relative quadrature tolerance.
    #[arg(long, global = true)]
    pub int_tol: Option<f64>,

    /// Grid size of the continuous threshold scan and of the verify grids.
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,

    /// Golden-section refinement tolerance.
    #[arg(long, global = true)]
    pub refine_tol: Option<f64>,

    /// Seed for Monte-Carlo checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem spec and print the optimal rule.
    Solve {
        /// Spec file, or an inline JSON object.
        spec: String,
    },
    /// Objective as a function of one rule parameter.
    Sweep(SweepArgs),
    /// Regenerate one of the worked-example tables.
    Table {
        #[arg(value_enum)]
        table: TableId,
    },
    /// Check a solved rule against the independent oracles.
    Verify {
        spec: String,
        /// Result JSON written by `solve`.
        result: PathBuf,
    },
    /// Monte-Carlo estimate of a solved rule's power.
    Mc {
        spec: String,
        result: PathBuf,
        /// Parameter value; defaults to the lower end of the null set.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub spec: String,

    #[arg(long, value_enum, default_value_t = SweepParam::Ell)]
    pub param: SweepParam,

    /// Fixed lower threshold for `--param p-ell`.
    #[arg(long, allow_hyphen_values = true)]
    pub ell: Option<f64>,

    /// Grid start; defaults to 0 for p-ell.
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,

    /// Grid end; defaults to 1 for p-ell.
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,

    #[arg(long, default_value_t = 200)]
    pub points: usize,

    /// Explicit comma-separated grid, instead of from/to/points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["from", "to"])]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Ell,
    PEll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableId {
    Table1,
    Table2,
    Table3,
}
