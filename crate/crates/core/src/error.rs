use thiserror::Error;

/// Errors raised by the sampler library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("integrator produced a non-finite state")]
    NonFiniteState,
    #[error("degenerate box on coordinate {coord}: lo = {lo}, hi = {hi}")]
    DegenerateBox { coord: usize, lo: f64, hi: f64 },
    #[error("gradient is singular at the origin for gamma = {gamma}")]
    SingularGradient { gamma: f64 },
    #[error("sensors {0} and {1} coincide but have no distance measurement")]
    DegeneratePair(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid index distribution: {0}")]
    InvalidIndexDistribution(String),
    #[error("invalid mass matrix: {0}")]
    InvalidMass(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("pilot path diverged for every candidate time-scale coefficient")]
    PilotDiverged,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
