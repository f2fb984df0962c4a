use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_IO: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;
pub const EXIT_COMPATIBILITY: u8 = 4;
pub const EXIT_INVARIANT: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {}: {source}", path.display())]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Solver(#[from] kinlayer::Error),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        use kinlayer::Error as E;
        match self {
            CliError::Config(_) | CliError::Read { .. } | CliError::Parse { .. } => EXIT_CONFIG,
            CliError::Write { .. } | CliError::Csv(_) => EXIT_IO,
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Solver(e) => match e {
                E::Compatibility { .. } => EXIT_COMPATIBILITY,
                E::NoConvergence { .. } | E::NonFinite(_) | E::Singular { .. } | E::Characteristic { .. } => {
                    EXIT_CONVERGENCE
                }
                E::Domain { .. } | E::InvalidParameter(_) | E::LengthMismatch { .. } | E::Unsupported(_) => EXIT_CONFIG,
                // the core error type is non-exhaustive in spirit; treat anything new as a solver failure
                #[allow(unreachable_patterns)]
                _ => EXIT_CONVERGENCE,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
