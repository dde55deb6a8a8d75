use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BLOW_UP: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {msg}")]
    ConfigLine { line: usize, msg: String },
    #[error("config key `{key}`: {msg}")]
    ConfigKey { key: String, msg: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("snapshot {}: {source}", path.display())]
    Snapshot {
        path: PathBuf,
        #[source]
        source: crate::snapshot::SnapshotError,
    },
    #[error("{0}")]
    Usage(String),
    #[error("blow-up at t={t}: {reason}")]
    BlowUp { t: f64, reason: String },
    #[error(transparent)]
    Core(nls_core::Error),
}

impl From<nls_core::Error> for CliError {
    fn from(e: nls_core::Error) -> Self {
        match e {
            nls_core::Error::BlowUp { t, reason } => CliError::BlowUp { t, reason },
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BlowUp { .. } => EXIT_BLOW_UP,
            _ => EXIT_USAGE,
        }
    }
}
