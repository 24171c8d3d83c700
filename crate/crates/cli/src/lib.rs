//! Command-line harness around `rowtopk`: data generation, batch runs,
//! statistics tables, the oracle gate and benchmarks.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod table;

pub use args::Cli;
pub use commands::execute;
pub use error::{CliError, CliResult};
pub use manifest::RunManifest;
pub use table::Table;
