//! Runs, sweeps, snapshots and verification suites on top of `nls-core`.

pub mod config;
pub mod error;
pub mod run;
pub mod snapshot;
pub mod sweep;
pub mod verify;

pub use error::{CliError, EXIT_BLOW_UP, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
