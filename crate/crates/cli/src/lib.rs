//! Library side of the `qdent` command-line tool: run configuration,
//! subcommand implementations and output formatting.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{OutputFormat, RunConfig};
pub use error::{CliError, ExitCode};
