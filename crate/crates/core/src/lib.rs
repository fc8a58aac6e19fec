//! Exact h-vectors of standard determinantal schemes.
//!
//! Starting from a degree matrix, this crate computes the h-vector (by a
//! memoized recursion and by a closed formula), decides levelness from the
//! last Eagon-Northcott module, builds the pure order ideal and matroid
//! realizing equal-rows h-vectors, and decides whether an arbitrary
//! sequence is a pure O-sequence.

pub mod degree_matrix;
pub mod error;
pub mod hseries;
pub mod level;
pub mod matroid;
pub mod pure_osequence;

pub use degree_matrix::{enumerate, validate, DegreeMatrix};
pub use error::{Error, Result};
pub use hseries::HVector;
