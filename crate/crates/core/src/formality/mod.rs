//! Derivation complexes, obstruction classes and the formality verdict,
//! with the fibration-level checks built on them.

mod certificate;
mod decide;
mod halperin;
mod obstruction;
mod replay;
mod slice;
mod tncz;

pub use certificate::{map_formality_certificate, BaseOf, Certificate, CertificateReport};
pub use decide::{
    decide_formality, model_of, run_obstructions, FormalityVerdict, GaugeStep, ModelSource, Outcome,
};
pub use halperin::{negative_derivations, NegativeDegree, NegativeDerivationReport};
pub use obstruction::{gauge_normalize, obstruction, ObstructionClass, ObstructionStatus};
pub use replay::{module_derivation_replay, ReplayReport};
pub use slice::{derivation_slice, DerivationSlice, SliceBasis};
pub use tncz::{fiber_cohomology, tncz_analyze, TnczReport};
