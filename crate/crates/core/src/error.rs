use thiserror::Error;

use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("cannot parse {0:?} as a rational")]
    Parse(String),

    #[error("delta {0} is below -1")]
    DeltaBelowMinusOne(Rational),

    #[error("delta {delta} times q = {q} is not an integer")]
    NotIntegral { delta: Rational, q: u64 },

    #[error("q must be a positive integer")]
    ZeroQ,

    #[error("{0} does not fit the supported integer range")]
    Overflow(String),

    #[error("sylvester index p must be at least 1")]
    ZeroIndex,

    #[error("sylvester index {p} exceeds the depth cap {cap}")]
    DepthCap { p: u64, cap: u64 },

    #[error("negative value {0} is not allowed here")]
    Negative(Rational),

    #[error("lcm bound needs delta >= 0, got {0}")]
    LcmNegativeDelta(Rational),

    #[error("position {position} is out of range for a tuple of length {len}")]
    Position { position: usize, len: usize },

    #[error("denominators must be positive and nondecreasing")]
    InvalidTuple,

    #[error("sequence entries must be positive and nonincreasing")]
    InvalidSequence,

    #[error("sequence lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("hypothesis does not hold: {0}")]
    Precondition(&'static str),

    #[error("conclusion violated: {0}")]
    Violated(String),

    #[error("volume {0} is negative; K+B is not semipositive")]
    NegativeVolume(Rational),

    #[error("malformed configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
