use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-positive density {rho}")]
    NonPositiveDensity { rho: f64 },

    #[error("non-positive pressure {p} (rho = {rho})")]
    NonPositivePressure { rho: f64, p: f64 },

    #[error("invalid gas model: gamma = {0} must exceed 1")]
    InvalidGamma(f64),

    /// A state became invalid inside a spatial sweep. `cell` is the interior
    /// index along x (and y in 2-D) of the cell or interface that failed.
    #[error("invalid state at cell {cell:?}: {source}")]
    AtCell {
        cell: (isize, isize),
        #[source]
        source: Box<Error>,
    },

    #[error("stage {stage} of step {step} at t = {time}: {source}")]
    AtStage {
        step: usize,
        stage: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("periodic boundary on one side must be paired with periodic on the opposite side")]
    InvalidPairing,

    #[error("ghost width {have} is smaller than the {need} layers required")]
    GhostTooNarrow { have: usize, need: usize },

    #[error("unknown problem {0} (expected 1..=15)")]
    UnknownProblem(u32),

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("malformed file {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn at_cell(self, cell: (isize, isize)) -> Self {
        Error::AtCell { cell, source: Box::new(self) }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io { path: path.into(), message: err.to_string() }
    }

    /// Strips location wrappers and returns the physical cause.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtCell { source, .. } | Error::AtStage { source, .. } => source.root(),
            other => other,
        }
    }

    /// True when the run died because the solution lost positivity, the
    /// outcome the benchmarks treat as a scheme failure rather than a bug.
    pub fn is_positivity_failure(&self) -> bool {
        matches!(self.root(), Error::NonPositiveDensity { .. } | Error::NonPositivePressure { .. })
    }
}
