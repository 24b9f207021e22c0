use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("scheme support {support} exceeds the amplitude constraint {amplitude}")]
    UnsupportedScheme { support: f64, amplitude: f64 },

    #[error("truncated Gaussian is numerically degenerate (A/sigma_x = {ratio:e})")]
    DegenerateTruncation { ratio: f64 },

    #[error("quadrature did not reach tolerance {abs_tol:e} within {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    QuadratureFailure {
        abs_tol: f64,
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("no KKT-certified distribution with at most {max_k} mass points (best violation {violation:e})")]
    NoConvergence { max_k: usize, violation: f64 },

    #[error("beta must be positive, got {0}")]
    InvalidBeta(f64),
}
