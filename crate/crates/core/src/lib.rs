//! Exact construction, amalgamation and verification of finite-dimensional
//! Hilbert spaces expanded by a projection or by a truncated distance to a
//! finite black set.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! integers. Distances are carried as squared values so every comparison is
//! decidable; square roots appear only in [`independence::forking_margin`]
//! and in display code.

pub mod blacksets;
pub mod error;
pub mod independence;
pub mod linalg;
pub mod pairs;
pub mod random;
pub mod rational;
pub mod witnesses;

pub use error::{Error, Result};
pub use linalg::{AmalgamEmbedding, Embedding, GramMatrix, RationalVector, Subspace};
pub use rational::Rational;
