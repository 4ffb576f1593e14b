//! Positive-definite quadratic spaces over exact ordered fields.
//!
//! Vectors are plain coordinate arrays of [`FieldElement`]s in one [`Tower`];
//! square roots needed for unit vectors and rotation angles are adjoined to
//! that tower as they come up.
//!
//! ```
//! use orthoset_field::Tower;
//! use orthoset_qspace::QuadraticSpace;
//!
//! let h = QuadraticSpace::identity(&Tower::rationals(), 2).unwrap();
//! let p = h.point(&h.vector_from_ints(&[1, 0])).unwrap();
//! let q = h.point(&h.vector_from_ints(&[3, 4])).unwrap();
//! let r = h.simple_rotation(&p, &q).unwrap();
//! assert_eq!(r.alpha().to_string(), "3/5");
//! assert_eq!(r.apply_point(&p), q);
//! ```

mod infinitesimal;
mod matrix;
mod rotation;
mod space;

pub use infinitesimal::{OrbitRecord, ProbeReport};
pub use matrix::{Matrix, Vector};
pub use rotation::Rotation;
pub use space::{OgReport, ProjPoint, QuadraticSpace};

use orthoset_field::FieldError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QspaceError {
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("quadratic spaces need dimension at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("zero vector")]
    ZeroVector,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("the two points must be distinct")]
    EqualPoints,
    #[error("rotations act in different planes")]
    PlaneMismatch,
    #[error("subspace is not invariant, or the operator moves its orthogonal complement")]
    NotInvariant,
    #[error("matrix does not preserve the form")]
    NotFormPreserving,
    #[error("scalar is zero or not infinitesimal")]
    NotInfinitesimal,
    #[error("vectors are not orthonormal")]
    NotOrthonormal,
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("parse error: {0}")]
    Parse(String),
}
