//! Error type shared by all core operations.
//!
//! Diagnostics are reported as `f64` regardless of the working scalar so the
//! enum stays non-generic and cheap to match on.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not Hermitian: max |m - m^dag| = {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace must be {expected}, found {found:.12e}")]
    InvalidTrace { expected: f64, found: f64 },

    #[error("state vector norm must be 1, found {norm:.12e}")]
    NotNormalized { norm: f64 },

    #[error("mixture weights must be nonnegative and sum to 1, sum = {sum:.12e}")]
    InvalidWeights { sum: f64 },

    #[error("subsystem structure {structure:?} does not factor dimension {dim}")]
    StructureMismatch { structure: Vec<usize>, dim: usize },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("unknown named state: {name}")]
    UnknownState { name: String },

    #[error("parameter {name} = {value} violates: {constraint}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("eigensolver failed to converge within {sweeps} sweeps")]
    EigConvergence { sweeps: usize },

    #[error("incompatible states for {context}: deviation {deviation:.3e}")]
    IncompatibleStates {
        context: &'static str,
        deviation: f64,
    },

    #[error("integration step failed at t = {time}: {source}")]
    StepFailed {
        time: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an error with the trajectory time at which it occurred.
    pub fn at_time(self, time: f64) -> Error {
        Error::StepFailed {
            time,
            source: Box::new(self),
        }
    }
}
