//! Exact linear algebra over a [`Scalar`](crate::Scalar) field.
//!
//! [`ScalarMatrix`] is a small dense matrix with the textbook operations.
//! [`Echelon`] is the workhorse: a sparse, incrementally built echelon basis
//! keyed by arbitrary ordered indices (usually monomials), which records how
//! each vector decomposes over the ones inserted before it.

mod dense;
mod echelon;

pub use dense::{ScalarMatrix, Solve};
pub use echelon::{Combination, Echelon, Insert, SparseVec};
