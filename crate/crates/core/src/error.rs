//! Error types shared across the solver.

use std::path::PathBuf;

use thiserror::Error;

/// Failures reported by a [`SystemModel`](crate::model::SystemModel).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("inadmissible state {state:?}: {reason}")]
    Inadmissible { state: Vec<f64>, reason: String },

    #[error("invalid parameter vector {theta:?}: {reason}")]
    InvalidTheta { theta: Vec<f64>, reason: String },

    #[error("loss of hyperbolicity at state {state:?} (characteristic speed squared {speed_sq})")]
    NotHyperbolic { state: Vec<f64>, speed_sq: f64 },

    #[error("flux mapping infeasible: {0}")]
    MappingInfeasible(String),
}

/// Failures of the discretization and time integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("cell {cell}: {source}")]
    Cell {
        cell: usize,
        #[source]
        source: ModelError,
    },

    #[error("interface {interface}: {source}")]
    Interface {
        interface: usize,
        #[source]
        source: ModelError,
    },

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("non-finite state produced by Runge-Kutta stage {stage}")]
    NonFinite { stage: usize },

    #[error("Legendre index {0} outside the supported range 0..=2")]
    UnsupportedDegree(usize),

    #[error("local coordinate {0} outside [-1, 1]")]
    CoordinateOutOfRange(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Top-level error for scenario runs and the command line tool.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("solver failure at t = {time}: {source}")]
    Solver {
        time: f64,
        #[source]
        source: SolverError,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {message}")]
    Csv { path: PathBuf, message: String },
}

impl Error {
    /// Process exit code for the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Solver { .. } => 2,
            Error::Io { .. } | Error::Csv { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
