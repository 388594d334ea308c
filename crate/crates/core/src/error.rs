use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is undefined for the zero polynomial")]
    ZeroPolynomial(&'static str),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("epsilon not small enough: {0}")]
    EpsilonTooLarge(String),
    #[error("vectors are not linearly dependent")]
    NotDependent,
    #[error("affine set H(q, p) is empty: {0}")]
    EmptyAffineSet(String),
    #[error("scale guard exceeded: {0}")]
    ScaleExceeded(String),
    #[error("set family is empty")]
    EmptyFamily,
    #[error("set family is finite")]
    FiniteFamily,
    #[error("approximation function vanishes on every sampled vector")]
    PsiVanishes,
    #[error("all measures are zero")]
    ZeroDenominator,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
