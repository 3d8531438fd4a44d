//! Configuration, output formats and subcommands of the `twotone` tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

pub use config::RunConfig;
