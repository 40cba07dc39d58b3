//! Error type shared by the library.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(crate::poset::ValidationReport),
    #[error("{0} is not open")]
    NotOpen(String),
    #[error("{0} is not closed")]
    NotClosed(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error("map is not monotone on the cover ({0},{1})")]
    NotMonotone(String, String),
    #[error("{0}")]
    NotAHomomorphism(String),
    #[error("not functorial: {0}")]
    NotFunctorial(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("base spaces differ")]
    BaseMismatch,
    #[error("{0}")]
    Precondition(String),
}
