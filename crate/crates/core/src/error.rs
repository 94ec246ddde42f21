use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid piecewise-constant function: {0}")]
    InvalidFunction(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state {value} outside domain [{lo}, {hi}]")]
    OutsideDomain { value: f64, lo: f64, hi: f64 },

    #[error("unsupported flux: {0}")]
    UnsupportedFlux(String),

    #[error("matrix is not diagonalizable over the reals: {0}")]
    NotDiagonalizable(String),

    #[error("front tracking guard tripped: {0}")]
    FrontTrackingGuard(String),

    #[error("inadmissible state in cell {cell} at t = {time}: {reason}")]
    Inadmissible {
        cell: usize,
        time: f64,
        reason: String,
    },

    #[error("invalid shock list: {0}")]
    InvalidShockList(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
