//! Exact ordered-field arithmetic.
//!
//! A [`Tower`] describes a field `K = K_0(√d_1, ..., √d_m)` with `K_0` either the
//! rationals or the rational functions `Q(t)` ordered with `t` a positive
//! infinitesimal. Square roots are adjoined on demand by [`FieldElement::sqrt`],
//! so any finite part of the Pythagorean closure of the base can be reached.
//!
//! ```
//! use orthoset_field::Tower;
//!
//! let k = Tower::rational_functions();
//! let x = k.parse("t*sqrt(1 + t^2)").unwrap();
//! assert!(x.is_infinitesimal());
//! assert_eq!(k.parse(&x.to_string()).unwrap(), x);
//! ```

pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod tower;

pub use ratfunc::RatFunc;
pub use tower::{Base, FieldElement, Sign, Tower, Valuation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative element")]
    NegativeRadicand,
    #[error("radicand is already a square in the tower")]
    AlreadySquare,
    #[error("operation requires the rational-function base Q(t)")]
    WrongBase,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("at {position}: {source}")]
    Field { position: usize, source: FieldError },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::Field { position, .. } => *position,
        }
    }
}
