use thiserror::Error;

/// Errors raised by the closed-form model, the Fock-space oracle and the probe simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("overdamped regime unsupported: 2*kappa = {two_kappa} <= |gamma_E - gamma_S| = {gamma_minus}")]
    Overdamped { two_kappa: f64, gamma_minus: f64 },

    #[error("time must be finite and non-negative, got {0}")]
    NegativeTime(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("truncation not converged: {0}")]
    Truncation(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("integrator failure: trace drift {drift:e} with step {dt} over {steps} steps")]
    TraceDrift { drift: f64, dt: f64, steps: usize },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
