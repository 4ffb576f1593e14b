//! Finite orthosets, the ortholattice of their orthoclosed subsets, and their
//! automorphism groups.
//!
//! ```
//! use orthoset_core::{Orthoset, OrthoLattice};
//!
//! let c6 = Orthoset::cycle(6).unwrap();
//! let l = OrthoLattice::build(&c6, 1024).unwrap();
//! assert_eq!(l.len(), 14);
//! assert!(!l.is_orthomodular());
//! ```

pub mod lattice;
pub mod orthoset;
pub mod perm;
pub mod pointset;

pub use lattice::{verify_atom_space_duality, HReport, LatticeError, OrthoLattice, ProjectiveReport};
pub use orthoset::{BudgetExceeded, Orthoset, OrthosetError};
pub use perm::{PermError, PermGroup, Permutation};
pub use pointset::PointSet;
