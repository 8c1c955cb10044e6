use num_bigint::BigInt;
use thiserror::Error;

/// Position-tagged failure while reading a form or other textual input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("degree {degree} is below the required minimum {required}")]
    DegreeTooSmall { degree: usize, required: usize },
    #[error("all coefficients are zero")]
    ZeroForm,
    #[error("leading coefficient a0 is zero")]
    ZeroLeadingCoefficient,
    #[error("discriminant is zero (repeated root)")]
    RepeatedRoot,
    #[error("precision budget of {bits} bits exhausted: {what}")]
    NonConvergence { bits: usize, what: String },
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("form is not certified irreducible")]
    NotIrreducible,
    #[error("epsilon {value} outside the open range (0, {upper})")]
    EpsilonOutOfRange { value: String, upper: String },
    #[error("y must be nonzero")]
    ZeroY,
    #[error("F(x, y) = 0 at ({x}, {y})")]
    ZeroValue { x: BigInt, y: BigInt },
    #[error("root {0} is not certified real")]
    NotRealRoot(usize),
    #[error("({x}, {y}) is not related to root {root}")]
    NotRelated { x: BigInt, y: BigInt, root: usize },
    #[error("root indices clash: {0}")]
    IndexClash(String),
    #[error("t = {0} is a root")]
    RootInput(String),
    #[error("expected 3 or 4 solutions, got {0}")]
    WrongCount(usize),
    #[error("cannot separate {value} from {threshold} at maximum precision")]
    UnresolvableBoundary { value: String, threshold: String },
    #[error("threshold not met: {0}")]
    ThresholdNotMet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
