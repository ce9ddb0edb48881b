//! Text format, commands and verification suites behind the `hg` binary.

pub mod app;
pub mod format;
pub mod verify;

pub use app::{run, Cli, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
