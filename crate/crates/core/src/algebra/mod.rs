//! Free graded-commutative algebras, derivations and free CDGAs.
//!
//! Signs follow the Koszul convention: moving `a` past `b` costs
//! `(-1)^{|a||b|}`, and a derivation of degree `q` picks up `(-1)^{q|a|}`
//! when it passes `a`.

mod cdga;
mod derivation;
mod free_cga;
mod monomial;
mod polynomial;

pub use cdga::{AlgebraMap, Cdga, LowerGrading, Violation};
pub use derivation::Derivation;
pub use free_cga::{FreeCga, Generator};
pub use monomial::{multiply_monomials, Monomial};
pub use polynomial::Polynomial;
