//! Experiment runner and metric evaluator behind the `wu` binary.
//!
//! Each experiment produces [`ResultRow`]s with a pass flag for the relation
//! it asserts; rows are written as CSV with 17 significant digits.

pub mod config;
pub mod eval;
pub mod experiments;
pub mod report;

pub use config::{Experiment, ExperimentConfig, Params};
pub use eval::{eval_metric, EvalKind};
pub use experiments::run_experiment;
pub use report::{write_csv, ResultRow};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Solver(wu_core::Error),
    #[error("output: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for usage and configuration problems, 3 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl From<wu_core::Error> for CliError {
    fn from(e: wu_core::Error) -> Self {
        use wu_core::Error as E;
        match e {
            E::InvalidParameter(_) | E::DimensionMismatch { .. } | E::OutsideDomain(_) | E::Unsupported(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Solver(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
