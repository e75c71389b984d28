//! A line-oriented text format for CDGAs and fibrations, and a canonical
//! JSON form of documents and reports.
//!
//! ```text
//! algebra heisenberg
//! generator x : degree 3
//! generator y : degree 3
//! generator z : degree 5
//! d z = x*y
//! ```
//!
//! A fibration has a `base` and a `fiber` section. Fiber generators may
//! carry `twist` terms involving the base, and a derivation `theta` of the
//! fiber coupled through a base class `via`, so that
//! `D(x) = d(x) + twist(x) + via·θ(x)`.

mod expr;
pub mod json;
mod parse;
mod permute;
mod print;
mod realize;

use std::collections::BTreeMap;

use crate::algebra::Polynomial;
use crate::Q;

pub use parse::parse;
pub use realize::extend_theta;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{line}:{column}: unknown generator `{name}`")]
    UnknownGenerator {
        line: usize,
        column: usize,
        name: String,
    },

    #[error("{line}:{column}: {what} should have degree {expected}, found {found}")]
    DegreeMismatch {
        line: usize,
        column: usize,
        what: String,
        expected: u32,
        found: String,
    },

    #[error("{line}:{column}: {message}")]
    InvalidDeclaration {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: u32,
    pub lower: Option<u32>,
}

/// Generators with their differentials. Polynomials are indexed by
/// position in `generators`.
#[derive(Clone, Debug, PartialEq)]
pub struct Section<F = Q> {
    pub generators: Vec<GeneratorDecl>,
    pub differential: BTreeMap<usize, Polynomial<F>>,
    /// Complete the declared generators to a bigraded model.
    pub complete: bool,
}

impl<F> Default for Section<F> {
    fn default() -> Self {
        Section {
            generators: Vec::new(),
            differential: BTreeMap::new(),
            complete: false,
        }
    }
}

/// The base of a fibration and how the fiber is twisted over it.
///
/// `twist` values are polynomials in the base generators followed by the
/// fiber generators; `theta` values are in the fiber generators; `via` is
/// in the base generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Fibration<F = Q> {
    pub base: Section<F>,
    pub twist: BTreeMap<usize, Polynomial<F>>,
    pub theta: BTreeMap<usize, Polynomial<F>>,
    pub via: Polynomial<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraDocument<F = Q> {
    pub name: String,
    /// The algebra itself, or the fiber of a fibration.
    pub section: Section<F>,
    pub fibration: Option<Fibration<F>>,
    pub warnings: Vec<String>,
}

impl<F> AlgebraDocument<F> {
    /// Number of base generators; they come first in every realization.
    pub fn base_len(&self) -> Option<usize> {
        self.fibration.as_ref().map(|f| f.base.generators.len())
    }

    pub fn is_fibration(&self) -> bool {
        self.fibration.is_some()
    }

    /// All declared generators, base first.
    pub fn declared(&self) -> impl Iterator<Item = &GeneratorDecl> {
        self.fibration
            .iter()
            .flat_map(|f| f.base.generators.iter())
            .chain(self.section.generators.iter())
    }
}
