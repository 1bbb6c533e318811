use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "voi", version, about = "Expected value of perfect information for decision problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a built-in case (ventilation, ashp, gshp) or a tabular problem file.
    Run(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// `ventilation`, `ashp`, `gshp`, `tabular`, or a path to a tabular JSON file.
    pub case: String,

    /// Tabular problem file when CASE is `tabular`.
    pub path: Option<PathBuf>,

    /// Monte Carlo sample count.
    #[arg(long, default_value_t = voi_core::DEFAULT_SAMPLES)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Override a case parameter, e.g. `--set alpha_cap=0.99` or `--set load.peak_power=30`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    /// Emit a convergence trace with a row every STRIDE samples.
    #[arg(long, value_name = "STRIDE")]
    pub trace: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads for sampling and surface construction.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,

    /// Hourly heating load for `gshp` (8760 rows, header `kw`).
    #[arg(long, value_name = "PATH")]
    pub load_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl RunArgs {
    pub fn new(case: impl Into<String>) -> Self {
        Self {
            case: case.into(),
            path: None,
            samples: voi_core::DEFAULT_SAMPLES,
            seed: 0,
            set: Vec::new(),
            trace: None,
            output: None,
            format: Format::Json,
            workers: 1,
            load_csv: None,
        }
    }
}
