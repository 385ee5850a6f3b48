//! Command-line front end for `phasepad`: configuration, subcommands and
//! plot-ready output files.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::RunConfig;
pub use error::CliError;
