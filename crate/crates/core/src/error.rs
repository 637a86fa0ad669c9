use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A numeric routine could not reach its tolerance. The best estimate is kept
    /// so callers can still report it.
    #[error("accuracy budget exceeded: {message} (estimate {estimate}, error bound {error_bound:e})")]
    Accuracy {
        message: String,
        estimate: Complex64,
        error_bound: f64,
    },

    #[error("membership error: {0}")]
    Membership(String),

    #[error("eta quotient is not holomorphic at cusp {cusp}: order {order}")]
    NotHolomorphic { cusp: String, order: String },

    /// The least-squares solution is kept so the residual rows can be reported.
    #[error("linear system inconsistent: relative residual {residual:e} exceeds {tol:e}")]
    Inconsistent {
        residual: f64,
        tol: f64,
        solution: Box<crate::lift::LiftSolution>,
    },

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn accuracy(msg: impl Into<String>, estimate: Complex64, error_bound: f64) -> Self {
        Error::Accuracy {
            message: msg.into(),
            estimate,
            error_bound,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
