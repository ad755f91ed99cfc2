//! Library side of the `steer` binary: config loading, presets, run output
//! and the three subcommands.

pub mod commands;
pub mod config;
pub mod output;
