//! Command-line front end for `finsheaf`: JSON space and sheaf files in, groups and
//! check verdicts out.

pub mod commands;
pub mod files;
pub mod render;

pub use commands::{run, Cli, Command, Outcome};
