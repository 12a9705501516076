//! Command-line front end for `maxsat-core`: JSON configs, CSV/JSON output
//! and the commands behind `maxsat`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Command, Overrides, Report};
pub use config::RunConfig;
pub use error::CliError;
