//! Command-line front end: `run`, `diagnose`, `theory-check`, `dict-stats`.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{cmd_diagnose, cmd_dict_stats, cmd_run, cmd_theory_check, DiagnoseArgs, DictStatsArgs, TheoryArgs};
pub use config::{parse_config, ExperimentConfig, Job, Method, Sweep, CONFIG_SCHEMA_VERSION};
pub use output::{environment_stamp, write_csv};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default)]
pub struct GlobalOpts {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(name = "bodi-kit", version, about = "Bayesian optimisation with dictionary-based Hamming embeddings")]
struct Cli {
    /// Overrides the seed list of a run config, or seeds other commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default: the config's out_dir, else ./out).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Maximum number of runs executed concurrently.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute the runs described by a JSON config.
    Run {
        config: PathBuf,
    },
    /// Fit the surrogate on random data and report predictive quality.
    Diagnose(DiagnoseArgs),
    /// Check the embedding identities and cardinality results on random instances.
    TheoryCheck(TheoryArgs),
    /// Coherence, cardinality bound and histograms of one dictionary.
    DictStats(DictStatsArgs),
}

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Config or argument validation; exit 2.
    Invalid(String),
    /// A referenced file is missing or unreadable; exit 3.
    MissingFile(String),
    /// A run or check failed; exit 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Failed(_) => 1,
            Self::Invalid(_) => 2,
            Self::MissingFile(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::Invalid(m) | Self::MissingFile(m) | Self::Failed(m) => m,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Io(io) => Self::MissingFile(io.to_string()),
            crate::Error::InvalidParameter(_) | crate::Error::InvalidDimension(_) | crate::Error::EnumerationTooLarge { .. } => {
                Self::Invalid(e.to_string())
            }
            other => Self::Failed(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let opts = GlobalOpts { seed: cli.seed, out_dir: cli.out_dir, workers: cli.workers, format: cli.format };
    let result = match cli.command {
        Command::Run { config } => cmd_run(&config, &opts),
        Command::Diagnose(args) => cmd_diagnose(&args, &opts),
        Command::TheoryCheck(args) => cmd_theory_check(&args, &opts),
        Command::DictStats(args) => cmd_dict_stats(&args, &opts),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("BODI_KIT_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).try_init();
}
