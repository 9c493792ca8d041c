use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative valuation")]
    NegativeValuation,
    #[error("wild slope: denominator {0} divisible by the residue characteristic")]
    WildSlope(i64),
    #[error("wild extension: factor {0} divisible by the residue characteristic")]
    WildExtension(u32),
    #[error("insufficient precision in {0}")]
    InsufficientPrecision(String),
    #[error("no root in residue field; degree {0} extension needed")]
    NoRootInResidueField(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("non-integral slope on edge {0}")]
    NonIntegralSlope(usize),
    #[error("divisor is not principal")]
    NotPrincipal,
    #[error("parts do not sum to the edge length")]
    LengthMismatch,
    #[error("action is not a graph automorphism: {0}")]
    NotAutomorphism(String),
    #[error("graph too large for isomorphism check ({0} edges)")]
    TooLarge(usize),
    #[error("duplicate marked point")]
    DuplicatePoint,
    #[error("point cannot be placed on the tree")]
    UnreducedPoint,
    #[error("no chart for component {0}")]
    ChartUnavailable(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("cocycle data missing for a split cycle")]
    MissingTwist,
    #[error("singular: discriminant vanishes identically")]
    Singular,
    #[error("no involution lift compatible with the covering maps")]
    ActionLiftFailed,
    #[error("loop edge {0} not allowed here")]
    LoopEdge(usize),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Input(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Precision,
    Unsupported,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InsufficientPrecision(_) | UnreducedPoint => ErrorClass::Precision,
            WildSlope(_) | WildExtension(_) | NoRootInResidueField(_) | ChartUnavailable(_)
            | Unsupported(_) | MissingTwist | TooLarge(_) => ErrorClass::Unsupported,
            Inconsistent(_) | ActionLiftFailed | Overflow(_) => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
