//! Library side of the experiment harness: spec loading, request building,
//! run orchestration, and report rendering. The `prodline` binary is a thin
//! dispatcher over these modules.

pub mod error;
pub mod experiment;
pub mod report;
pub mod runner;
pub mod tables;

pub use error::CliError;
