//! Command-line driver for `phasewig-core`: TOML scenario configs in,
//! CSV states, fields and reports out.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod selftest;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use commands::{RunOptions, RunReport};
pub use config::RunConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "phasewig", version, about = "Cross-Wigner transforms, quasi-probabilities and weak values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for randomized states and suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Subsampling of reflection centers in the direct weak value. Values
    /// above 1 are faster and less accurate.
    #[arg(long, global = true, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Wigner or cross-Wigner transform of configured states.
    Wigner,
    /// Weak value by quadrature and by direct operator application.
    Weakvalue,
    /// Closed-form coherent-state evaluations.
    Analytic,
    /// Time-symmetric weak values along a Hamiltonian evolution.
    Evolve,
    /// Recover a state from a cross-Wigner field file.
    Reconstruct,
    /// Wigner function of a coherent-state superposition with its pair terms.
    Compass,
    /// Run the invariant suite.
    Selftest,
}

/// Loads the config, runs the command and writes its outputs. Nothing is
/// written unless the whole computation succeeded.
pub fn run(command: Command, config: Option<&Path>, out: &Path, opts: RunOptions) -> CliResult<RunReport> {
    let cfg = match (config, command) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Command::Selftest) => RunConfig::default_selftest(),
        (None, _) => return Err(CliError::Config("--config is required for this subcommand".into())),
    };
    let report = match command {
        Command::Wigner => commands::wigner_cmd(&cfg, opts)?,
        Command::Weakvalue => commands::weakvalue_cmd(&cfg, opts)?,
        Command::Analytic => commands::analytic_cmd(&cfg, opts)?,
        Command::Evolve => commands::evolve_cmd(&cfg, opts)?,
        Command::Reconstruct => commands::reconstruct_cmd(&cfg, opts)?,
        Command::Compass => commands::compass_cmd(&cfg, opts)?,
        Command::Selftest => selftest::selftest_cmd(&cfg, opts)?,
    };
    report.outputs.write_all(out)?;
    Ok(report)
}
