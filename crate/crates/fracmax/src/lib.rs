//! Command-line front end for `fracmax-core`: TOML configuration, closed-form
//! fields, CSV output and the verification suites.

pub mod cli;
pub mod config;
pub mod expr;
pub mod logging;
pub mod output;
pub mod suites;

pub use cli::{run, Cli, ExitStatus};
