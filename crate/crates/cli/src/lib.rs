//! Library side of the `jsr` command: problem files, reports, sphere export
//! and the three commands (`run`, `bounds`, `sphere`).

pub mod commands;
pub mod options;
pub mod problem;
pub mod report;
pub mod sphere;

use std::io;

pub use commands::{cmd_bounds, cmd_jsr, cmd_sphere, BoundsOptions, Outcome};
pub use options::{AveragingArg, LookupArg, RunOptions};
pub use problem::ProblemFile;
pub use report::{BoundsReport, RunReport};
pub use sphere::SphereData;

/// Process exit statuses.
pub mod exit {
    pub const CONVERGED: u8 = 0;
    pub const NOT_CONVERGED: u8 = 2;
    pub const INVALID_INPUT: u8 = 3;
    pub const REDUCIBLE: u8 = 4;
    pub const CAP_EXCEEDED: u8 = 5;
    /// I/O failures and anything else unexpected.
    pub const FAILURE: u8 = 1;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: io::Error },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Core(#[from] jsr_core::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use jsr_core::Error as E;
        match self {
            CliError::InvalidInput(_) | CliError::Read { .. } => exit::INVALID_INPUT,
            CliError::Core(E::Reducible(..)) => exit::REDUCIBLE,
            CliError::Core(E::CapExceeded { .. }) => exit::CAP_EXCEEDED,
            CliError::Core(
                E::EmptySet
                | E::ZeroMatrix { .. }
                | E::NonFinite { .. }
                | E::IndexOutOfRange { .. }
                | E::InvalidNodeCount(_)
                | E::InvalidTolerance(_)
                | E::InvalidMaxIters
                | E::InvalidGauge(_)
                | E::GridMismatch { .. }
                | E::InvalidDepth,
            ) => exit::INVALID_INPUT,
            _ => exit::FAILURE,
        }
    }
}
