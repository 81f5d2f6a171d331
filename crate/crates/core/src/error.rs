use thiserror::Error;

/// Errors raised by law evaluators, samplers and experiment runners.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge on [{a}, {b}] after {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    NonConvergence {
        a: f64,
        b: f64,
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("probability {p} outside attainable range [{lo}, {hi}]")]
    OutOfRange { p: f64, lo: f64, hi: f64 },

    #[error("rejection sampler gave up after {attempts} attempts")]
    RejectionBudgetExceeded { attempts: u64 },

    #[error("empty sample batch")]
    EmptyBatch,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
