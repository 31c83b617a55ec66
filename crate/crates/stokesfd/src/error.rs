use thiserror::Error;

/// Errors produced by the symbolic layers of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in coefficient field")]
    DivisionByZero,
    #[error("pole at evaluation point")]
    PoleAtEvaluation,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported accuracy index {0} for central-difference operator")]
    UnsupportedAccuracy(u32),
    #[error("elimination does not reproduce published scheme")]
    SchemeDerivationMismatch,
    #[error("quadrature does not reproduce published pressure equation")]
    QuadratureMismatch,
    #[error("unknown manufactured case `{0}`")]
    UnknownCase(String),
    #[error("grid too small: need at least {need} nodes per direction, got {got}")]
    GridTooSmall { need: usize, got: usize },
    #[error("grid cells are not square: dx={dx}, dy={dy}")]
    NonSquareCells { dx: f64, dy: f64 },
    #[error("linear system is singular (zero pivot at row {0})")]
    SingularSystem(usize),
    #[error("solver did not reach requested tolerance: residual {residual:e} > {tol:e}")]
    NonConvergence { residual: f64, tol: f64 },
    #[error("invalid case file: {0}")]
    InvalidCase(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
