//! Command-line runner for the `hyperorbit` experiments.

pub mod commands;
pub mod config;
mod runner;

pub use runner::{exit_code_for, main_with_args, Cli, Command};
