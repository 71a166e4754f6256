use std::fmt::Display;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Failure of a command, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, schema violations or invalid inputs. Exit code 2.
    #[error("{0}")]
    Config(String),
    /// A file could not be read or written. Exit code 3.
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// A planner produced something the simulator rejects. Exit code 4.
    #[error("{0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn config(msg: impl Display) -> Self {
        CliError::Config(msg.to_string())
    }

    pub fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Invariant(_) => 4,
        }
    }

    /// Stable tag printed as `error[<tag>]: ...`.
    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Invariant(_) => "invariant",
        }
    }
}

macro_rules! config_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::config(e)
            }
        }
    )*};
}

config_errors!(
    contentcast_core::catalog::CatalogError,
    contentcast_core::pet::PetError,
    contentcast_core::pet::wire::WireError,
    contentcast_core::workload::WorkloadError,
    contentcast_core::crowd::CrowdError
);

impl From<contentcast_core::sched::SchedError> for CliError {
    fn from(e: contentcast_core::sched::SchedError) -> Self {
        use contentcast_core::sched::SchedError;
        match e {
            // Planner output the simulator refuses is our bug, not the user's.
            SchedError::Plan(p) => CliError::Invariant(p.to_string()),
            other => CliError::config(other),
        }
    }
}
