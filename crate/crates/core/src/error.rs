use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point (t={t}, r={r}) outside the evaluator domain: {reason}")]
    Domain { t: f64, r: f64, reason: String },

    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (best estimate {best}, error estimate {error_estimate})"
    )]
    Convergence {
        best: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("integrand returned a non-finite value at abscissa {abscissa}")]
    Evaluation { abscissa: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = WaveError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> WaveError {
    WaveError::InvalidArgument(msg.into())
}
