//! File formats, configuration, parallel runners and the `chargeneg` command
//! line for [`chargeneg_core`].

pub mod config;
pub mod error;
pub mod formats;
pub mod runner;
pub mod table;

pub use error::{CliError, CliResult};
