//! Exact rational linear algebra and integer Laurent polynomials.

mod laurent;
mod matrix;

pub use laurent::{Exponent, LaurentPoly};
pub use matrix::{
    height, is_zero_vec, q, vec_add, vec_axpy, EchelonSpan, ExactMatrix, Rational, Rref,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum FoundationError {
    #[error("undefined denominator")]
    UndefinedDenominator,
    #[error("cannot parse Laurent polynomial: {0}")]
    Parse(String),
}

/// Denominator vector of a nonzero Laurent polynomial.
pub fn lp_denominator_vector(p: &LaurentPoly) -> Result<Vec<i64>, FoundationError> {
    p.denominator_vector()
}
