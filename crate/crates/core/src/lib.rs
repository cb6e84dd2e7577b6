//! Exact computational algebra around the maximal torus normalizer of
//! `Sp(n)` at the prime 2.
//!
//! The crate builds the finite and discrete objects involved (signed
//! permutation Weyl groups, the 2-discrete torus, quaternionic monomial
//! matrices, Oliver's 2-stubborn subgroups) and checks the finite
//! computations about them: normal subgroups of 2-power index, singular
//! sets of reflections, centralizer Weyl groups, extension splitting,
//! commutants, low-degree cohomology and invariant rings.

pub mod centralizer;
pub mod cohomology;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod normalizer;
pub mod report;
pub mod stubborn;
pub mod torus;
pub mod weyl;

pub use error::{Error, Result};
