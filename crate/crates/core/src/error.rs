use thiserror::Error;

/// Errors raised by the path, solver, oracle and certificate routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("word `{0}` is not an admissible path type")]
    InadmissibleWord(String),

    #[error("no multistart run converged ({starts} starts, best residual {best_residual:.3e})")]
    NoSolution { starts: usize, best_residual: f64 },

    #[error("abnormal certificate unavailable: {}", .0.join("; "))]
    AbnormalityUnavailable(Vec<String>),

    #[error("certificate construction failed: {0}")]
    Certificate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
