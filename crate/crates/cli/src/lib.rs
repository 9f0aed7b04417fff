//! Command-line front end for `ecokmap-core`: TOML run configs, CSV data and
//! SVG plots.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod svg;

pub use commands::{execute, run, Cli, Command, RunArgs};
pub use config::{parse_config, serialize_config, RunConfig};
pub use error::{CliError, ConfigError};

/// Exit status for command-line usage errors.
pub const EXIT_USAGE: i32 = 1;
