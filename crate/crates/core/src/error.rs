use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("both polynomials are constant in the eliminated variable")]
    DegenerateElimination,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("constant polynomial not allowed here")]
    ConstantPolynomial,
    #[error("numerically unstable: {0}")]
    NumericUnstable(String),
    #[error("Jacobian determinant vanishes identically")]
    DegenerateMap,
    #[error("rectification failed: {0}")]
    RectifyFailed(String),
    #[error("branch locus is not isomorphic to the line: {0}")]
    NotInClass(String),
    #[error("second component does not have the semi-monomial shape: {0}")]
    ShapeMismatch(String),
    #[error("first component is not of the form x^d + c after normalisation: {0}")]
    Lemma1MiddleCoefficients(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error at offset {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
    #[error("no generic sample point found after {0} attempts")]
    SamplingFailed(usize),
    #[error("elimination exceeds the size limit: {0}")]
    TooLarge(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
