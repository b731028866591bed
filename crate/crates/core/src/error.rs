use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("variable tag mismatch: {0} vs {1}")]
    VarMismatch(char, char),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("matrix is not upper triangular")]
    NotTriangular,
    #[error("diagonal entry {0} is zero or not a constant")]
    BadDiagonal(usize),
    #[error("hypergeometric series does not terminate")]
    NonTerminating,
    #[error("denominator Pochhammer vanishes at term {0} before termination")]
    DenominatorZero(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("closing equation fails for l={ell}, w={w}, k={k}")]
    ClosingEquation { ell: usize, w: usize, k: usize },
    #[error("conjugated coefficient is not polynomial")]
    NonPolynomial,
    #[error("representation ({m1}, {m2}) does not contain the K-type of dimension {dim}")]
    NoKType { m1: String, m2: String, dim: usize },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("not a rotation matrix: {0}")]
    NotRotation(String),
    #[error("series did not terminate within {0} terms although the eigenvalue has polynomial form")]
    Exhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
