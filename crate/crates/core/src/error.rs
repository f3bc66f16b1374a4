use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("singular system: pivot {pivot:e} against scale {scale:e}")]
    Singular { pivot: f64, scale: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("incompatible problem/algorithm pairing: {0}")]
    Incompatible(String),

    #[error("root bracket could not be established after {doublings} doublings")]
    BracketExpansion { doublings: usize },

    #[error("implicit solve did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("pole: 1 + eta*lambda vanishes for lambda = {lambda}")]
    Pole { lambda: f64 },

    #[error("csv: {0}")]
    Csv(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
