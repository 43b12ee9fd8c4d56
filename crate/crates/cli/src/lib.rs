//! Command-line runner: scenario ingestion, policy evaluation, optimization,
//! failure-cost sweeps and reproduction of the published tables, all with
//! CSV output and a JSON manifest per file.

pub mod app;
pub mod bundled;
pub mod config;
pub mod engine;
pub mod error;
pub mod output;
pub mod reference;
pub mod reproduce;

pub use app::{run, Cli};
pub use error::{CliError, CliResult};
