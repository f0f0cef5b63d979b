//! File formats and command-line front end for `subrule-core`.
//!
//! Tables are read from headed CSV files, rule sets and reports are written
//! as JSON, and run settings come from a flat `key = value` file that flags
//! override.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod report;

pub use config::RunConfig;
pub use error::{CliError, Result};
