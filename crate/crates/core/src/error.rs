use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("all coordinates are zero")]
    AllZero,
    #[error("point lies in the support of the subscheme{}", term.map(|t| format!(" (term {t})")).unwrap_or_default())]
    SupportPoint { term: Option<usize> },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("invalid SNC pair: {0}")]
    InvalidSncPair(String),
    #[error("divisor {0} has negative multiplicity in the pulled-back boundary")]
    NegativeB(String),
    #[error("quotient order must be at least 2, got {0}")]
    BadOrder(i64),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("curve is not squarefree")]
    NotSquarefree,
    #[error("resolution needs a center defined over an extension of Q (at depth {depth})")]
    NonRationalCenter { depth: usize },
    #[error("resolution did not finish within depth {0}")]
    DepthExceeded(usize),
    #[error("invalid blowup center: {0}")]
    InvalidCenter(String),
    #[error("invalid parametrization: {0}")]
    InvalidParametrization(String),
    #[error("point is the origin (0:0:1)")]
    PointIsO,
    #[error("exponents {d} and {m} are not coprime")]
    NotCoprime { d: u32, m: u32 },
    #[error("exponents must satisfy d > m >= 1, got d={d}, m={m}")]
    InvalidExponents { d: u32, m: u32 },
    #[error("empty or reversed range [{lo}, {hi}]")]
    BadRange { lo: i64, hi: i64 },
    #[error("no points left after filtering")]
    EmptyAfterFilter,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
