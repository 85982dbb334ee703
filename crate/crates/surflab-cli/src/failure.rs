//! Two-level failure type realizing the exit-status contract.

use std::fmt;

/// A failed run, split by who is at fault.
#[derive(Debug)]
pub enum Failure {
    /// The configuration was rejected before any computation (exit 2).
    Config(anyhow::Error),
    /// An analysis started and failed (exit 1).
    Analysis(anyhow::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "invalid configuration: {e:#}"),
            Failure::Analysis(e) => write!(f, "analysis failed: {e:#}"),
        }
    }
}

impl Failure {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Analysis(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Shorthand for a configuration rejection.
pub fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Config(anyhow::anyhow!(msg.into())))
}

/// Shorthand for an analysis failure.
pub fn analysis_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Analysis(anyhow::anyhow!(msg.into())))
}

/// Maps a core error into an analysis failure with context.
pub fn core_analysis(context: &str, e: surflab_core::Error) -> Failure {
    Failure::Analysis(anyhow::anyhow!("{context}: {e}"))
}

/// Maps a core error into a configuration rejection with context.
pub fn core_config(context: &str, e: surflab_core::Error) -> Failure {
    Failure::Config(anyhow::anyhow!("{context}: {e}"))
}

/// Maps an IO error on a named path into an analysis failure.
pub fn io_analysis(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Analysis(anyhow::anyhow!("{}: {e}", path.display()))
}
