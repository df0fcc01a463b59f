use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CtkError {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("functor does not act freely: it fixes {0}")]
    NotFree(String),
    #[error("quotient is infinite: the functor does not move along the translation direction")]
    InfiniteQuotient,
    #[error("ext degree {i} outside 0 < i < {m}")]
    ExtDegree { i: usize, m: usize },
    #[error("mutation invariant violated: {0}")]
    Mutation(String),
    #[error("exchange graph inconsistent: {0}")]
    PathInconsistency(String),
    #[error("enumerators disagree: {0}")]
    CountMismatch(String),
    #[error("object is not periodic under the functor: {0}")]
    NotPeriodic(String),
    #[error("unknown object: {0}")]
    UnknownObject(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, CtkError>;
