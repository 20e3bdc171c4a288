//! Configuration, commands and output behind the `rwc` binary.

pub mod commands;
pub mod config;
pub mod output;

pub use config::{Format, Frame, InitialState, Overrides, RunConfig};
pub use output::{write_tables, Table};
