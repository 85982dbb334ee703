//! Batch runner around [`surflab_core`]: file formats, subcommands, and
//! reproducible report artifacts.
//!
//! Every subcommand reads a space from a JSON file (or builds one with
//! `generate`), runs one family of diagnostics, and writes JSON/CSV
//! artifacts into the output directory. Outputs are deterministic: the
//! same configuration and seed produce bytewise-identical files, and every
//! report embeds the configuration hash and library version.
//!
//! Exit status contract: `0` when the run completed and every selected
//! check passed, `1` when an analysis failed or a check did not pass, `2`
//! when the configuration was invalid.

pub mod cli;
pub mod commands;
pub mod config;
pub mod failure;
pub mod formats;

pub use cli::Cli;
pub use failure::{CliResult, Failure};

/// Executes a parsed invocation. `Ok(true)` means every selected check
/// passed; `Ok(false)` means the run completed but at least one check
/// failed.
pub fn run(cli: Cli) -> CliResult<bool> {
    commands::dispatch(cli)
}
