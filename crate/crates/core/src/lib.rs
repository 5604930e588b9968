//! Finite-dimensional C*-algebras, their symmetric tensor powers and crossed products.
//!
//! The crate computes Wedderburn decompositions of `S^n(A) = (A^{⊗n})^{S_n}`, builds
//! covariant representations and their induced versions, and enumerates and realizes
//! the irreducible representations of symmetric powers.

pub mod algebra;
pub mod classify;
pub mod cli;
pub mod crossed;
pub mod error;
pub mod formats;
pub mod groups;
pub mod induction;
pub mod linalg;
pub mod structure;
pub mod suites;
