//! JSON file formats and the `fpa` command-line front end.

pub mod app;
pub mod exit;
pub mod format;

pub use app::{run, Cli, CliError, Status};
