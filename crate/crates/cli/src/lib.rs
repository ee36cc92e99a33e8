//! Experiment runner for the directed preferential attachment laboratory.

pub mod cli;
pub mod commands;
pub mod error;
pub mod experiments;
pub mod output;
pub mod selftest;
pub mod settings;

pub use error::{CliError, CliResult};
