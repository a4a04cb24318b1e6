use thiserror::Error;

use crate::kernel::RatScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("bottom Pochhammer symbol vanishes at k = {index}")]
    ZeroBottomPochhammer { index: usize },

    #[error("repeated pole at {pole}")]
    RepeatedPole { pole: RatScalar },

    #[error("denominator has a root outside the supplied candidate poles (residual factor of degree {residual_degree})")]
    IrrationalPole { residual_degree: usize },

    #[error("numerator degree {num} exceeds denominator degree {den}")]
    ImproperFraction { num: usize, den: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index {n} out of range 0..={max}")]
    InvalidIndex { n: usize, max: usize },

    #[error("operator coefficient has a pole at grid point x = {x}")]
    CoefficientPoleOnGrid { x: usize },

    #[error("rational function has a pole at grid point x = {x}")]
    PoleOnGrid { x: i64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("basis matrix is singular")]
    SingularBasisMatrix,

    #[error("degenerate denominator in {what} at n = {n}")]
    DegenerateDenominator { what: &'static str, n: usize },

    #[error("raising property violated at n = {n}: stray pole at {pole}")]
    SpanViolation { n: usize, pole: RatScalar },

    #[error("unknown selector: {0}")]
    UnknownSelector(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Errors that come from a parameter choice hitting a pole or a vanishing
    /// denominator, as opposed to malformed input.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::ZeroDenominator
                | Error::ZeroBottomPochhammer { .. }
                | Error::CoefficientPoleOnGrid { .. }
                | Error::PoleOnGrid { .. }
                | Error::SingularBasisMatrix
                | Error::DegenerateDenominator { .. }
                | Error::RepeatedPole { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
