use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::foundation::FoundationError;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum Error {
    #[error(transparent)]
    Foundation(#[from] FoundationError),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid exchange matrix: {0}")]
    InvalidMatrix(String),
    #[error("seed not on a cluster pattern")]
    SeedNotOnPattern,
    #[error("not finite type within cap {cap}")]
    NotFiniteType { cap: usize },
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("object outside the domain: {0}")]
    Domain(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("not a string module")]
    NotStringModule,
    #[error("module is not locally free")]
    NotLocallyFree,
    #[error("rank vector has a negative entry")]
    NegativeRank,
    #[error("oracle inconclusive")]
    OracleInconclusive,
}

pub type Result<T> = std::result::Result<T, Error>;
