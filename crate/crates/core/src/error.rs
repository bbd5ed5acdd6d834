use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("divisor is not monic of degree >= 1")]
    DivisorNotMonic,
    #[error("second polynomial has degree {got}, expected at most {max}")]
    DegreeTooHigh { got: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("negative input {0} has no four-square decomposition")]
    NegativeInput(String),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("polynomial has {distinct_real_roots} distinct real roots but degree {degree}")]
    NotStrictRealZero {
        distinct_real_roots: usize,
        degree: usize,
    },
    #[error("squarefree part has {distinct_real_roots} distinct real roots but degree {degree}")]
    NotRealZero {
        distinct_real_roots: usize,
        degree: usize,
    },
    #[error("internal certificate check failed: {0}")]
    InternalCertificateFailure(String),
    #[error("search space of {estimate} candidates exceeds the budget of {budget}")]
    BoundsTooLarge { estimate: String, budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}
