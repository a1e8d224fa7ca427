//! JSON formats, a thread-pool executor, benchmarks and the `capelli`
//! command line on top of `capelli-core`.

pub mod algebra_spec;
pub mod bench;
pub mod cli;
pub mod clock;
pub mod error;
pub mod exec;
pub mod json;
pub mod report;

pub use capelli_core as core;
pub use error::CliError;
