//! Library side of the `ghost-scaler` binary: configuration resolution,
//! CSV/JSON output, the deterministic worker pool and the subcommand
//! implementations. Kept as a lib so integration tests can drive the
//! same code paths the binary uses.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;
pub mod pool;

/// Errors surfaced to the user, mapped onto the documented exit codes:
/// configuration problems exit 2, numerical/runtime failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(format!("io: {e}"))
    }
}

impl From<ghost_core::SsaError> for CliError {
    fn from(e: ghost_core::SsaError) -> Self {
        match e {
            ghost_core::SsaError::InvalidConfig(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<ghost_core::ModelError> for CliError {
    fn from(e: ghost_core::ModelError) -> Self {
        match e {
            ghost_core::ModelError::InvalidParameter(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<ghost_core::ScalingError> for CliError {
    fn from(e: ghost_core::ScalingError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<ghost_core::OrbitError> for CliError {
    fn from(e: ghost_core::OrbitError) -> Self {
        CliError::Numerical(e.to_string())
    }
}
