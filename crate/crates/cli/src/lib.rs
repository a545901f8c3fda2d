//! Command-line front end: input formats, report assembly and the `pdrank`
//! subcommands. The binary is a thin wrapper around [`run`].

mod commands;
pub mod config;
pub mod formats;
pub mod parallel;
pub mod report;

pub use commands::{run, Format, EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, EXIT_RESOURCE};
