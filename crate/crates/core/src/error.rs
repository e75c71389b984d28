use thiserror::Error;

use crate::dsl::DslError;

/// Errors raised by the algebra, model and formality layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree {requested} exceeds the degree cap {cap}")]
    DegreeOverCap { requested: u32, cap: u32 },

    #[error("generator index {0} does not belong to this algebra")]
    ForeignGenerator(usize),

    #[error("generator `{name}` has degree {degree}; generators must have degree at least 2")]
    DegreeTooSmall { name: String, degree: u32 },

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("derivations are not compatible: {0}")]
    IncompatibleDerivations(String),

    #[error("the differential squares to {residue} on `{generator}`")]
    NotADifferential { generator: String, residue: String },

    #[error("`{generator}`: {reason}")]
    Inhomogeneous { generator: String, reason: String },

    #[error("element is not closed")]
    NotClosed,

    #[error("no lift exists for generator `{0}` within the realized degrees")]
    LiftFailed(String),

    #[error("map does not commute with the differentials at `{0}`")]
    NotChainMap(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("witness rejected: {0}")]
    WitnessRejected(String),

    #[error("cap {cap} is too small: {reason}")]
    CapTooSmall { cap: u32, reason: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Dsl(#[from] DslError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
