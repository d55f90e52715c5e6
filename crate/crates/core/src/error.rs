use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("time series is empty")]
    EmptySeries,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("sampling interval must be positive and finite, got {0}")]
    InvalidInterval(f64),

    #[error("max lag {max_lag} out of range for {len} samples")]
    LagOutOfRange { max_lag: usize, len: usize },

    #[error("degenerate signal: b(0) = {0} is not positive")]
    DegenerateVariance(f64),

    #[error("truncation size {size} out of range (1..={available})")]
    SizeOutOfRange { size: usize, available: usize },

    #[error("horizon {horizon} exceeds available lag span {span}")]
    HorizonTooLong { horizon: f64, span: f64 },

    #[error("eigen iteration did not converge after {iterations} steps (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("dense oracle limited to N <= {limit}, got {size}")]
    OracleSizeLimit { size: usize, limit: usize },

    #[error("spectrum has no atoms")]
    NoAtoms,

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("overdamped oscillator: c = {c} >= 2*sqrt(a1) = {limit}")]
    Overdamped { c: f64, limit: f64 },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}
