//! Command-line workflow for `curvestat`: dataset generation, estimation and the plain-text
//! file formats that connect them.

pub mod commands;
pub mod error;
pub mod format;

pub use commands::{configure_threads, run, Cli};
pub use error::{CliError, CliResult};
