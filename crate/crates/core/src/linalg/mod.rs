//! Exact rational inner-product algebra: vectors, orthogonal-basis subspaces,
//! projections, Gram matrices and free joins over a common base.

mod embedding;
mod gram;
mod subspace;
mod vector;

pub use embedding::{free_join, free_join_many, AmalgamEmbedding, Embedding, JoinCertificate};
pub use gram::{gram_of_tuple, GramMatrix};
pub use subspace::{project_decompose, relative_complement, span, Subspace};
pub use vector::{inner, RationalVector};
