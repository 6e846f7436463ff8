use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: best estimate {estimate}, error bound {error_bound:e}")]
    NonConvergence { estimate: Complex64, error_bound: f64 },

    #[error("points coincide (separation {separation:e} m)")]
    CoincidentPoints { separation: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("invariant violated at row {row}: {message}")]
    Invariant { row: usize, message: String },

    #[error("frequencies not strictly increasing at row {row}")]
    Order { row: usize },

    #[error("omega {omega:e} outside tabulated range [{min:e}, {max:e}]")]
    Range { omega: f64, min: f64, max: f64 },

    #[error("need at least {required} sizes, got {got}")]
    InsufficientSizes { required: usize, got: usize },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
