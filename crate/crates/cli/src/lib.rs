//! Command-line harness for `ptone-core`: parameter sweeps emitted as CSV or
//! JSON, and the numbered acceptance suite behind `ptone selftest`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use error::{CliError, CliResult};
