//! Configuration, sweeps and artifact plumbing for the `schmidt-bec` tool.

pub mod config;
pub mod ground_state;
pub mod scales;
pub mod sweep;

use thiserror::Error;

pub use config::{Method, RunConfig};
pub use ground_state::{cmd_ground_state, cmd_verify, Sidecar, VerifyReport};
pub use scales::cmd_scales;
pub use sweep::{cmd_sweep, SweepRow};

pub const DEFAULT_MEM_CAP_GIB: f64 = 4.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
