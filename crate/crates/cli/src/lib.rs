//! Library half of the `cluster` binary: argument and config-file
//! handling, generator-spec parsing, algorithm execution, and output
//! writers. The binary in `main.rs` is a thin dispatcher so everything
//! here is exercisable from integration tests.

pub mod args;
pub mod commands;
pub mod genspec;
pub mod outputs;
pub mod runner;

pub use commands::{dispatch, CliError};
