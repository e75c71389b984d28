//! Sullivan, bigraded and filtered models of simply-connected CDGAs over
//! the rationals, and a decision procedure for formality.
//!
//! The pipeline for a CDGA `A` truncated at a degree cap is:
//!
//! 1. compute `H(A)` degreewise with representatives and products
//!    ([`cohomology`]);
//! 2. resolve `H(A)` by a bigraded model `(ΛV, d)` ([`models::bigraded`]);
//! 3. perturb it to a filtered model `(ΛV, D)` with `D = d + d_2 + d_3 + …`
//!    and a quasi-isomorphism to `A` ([`models::filtered`]);
//! 4. look for the first nonzero `d_i`, test whether it is a boundary in
//!    the derivation complex, and gauge it away if so ([`formality`]).
//!
//! All arithmetic is exact. Everything is generic over a [`Scalar`]
//! field; the aliases below fix it to arbitrary-precision rationals.

pub mod algebra;
pub mod cohomology;
pub mod dsl;
pub mod error;
pub mod fixtures;
pub mod formality;
pub mod linalg;
pub mod models;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// The rationals.
pub type Q = num_rational::BigRational;

pub type Polynomial = algebra::Polynomial<Q>;
pub type Derivation = algebra::Derivation<Q>;
pub type Cdga = algebra::Cdga<Q>;
pub type ScalarMatrix = linalg::ScalarMatrix<Q>;
pub type GradedAlgebra = cohomology::GradedAlgebra<Q>;
pub type BigradedModel = models::BigradedModel<Q>;
pub type FilteredModel = models::FilteredModel<Q>;
pub type RelativeModel = models::RelativeModel<Q>;
