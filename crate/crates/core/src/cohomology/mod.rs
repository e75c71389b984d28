//! Degreewise cohomology of free CDGAs, cohomology algebras and induced maps.

mod engine;
mod graded_algebra;

pub(crate) use engine::sparse;
pub use engine::{
    bigraded_presentation, cocycles, cohomology, cohomology_degree, induced_map, is_exact,
    presentation, surjective_up_to, AlgebraMorphismOnCohomology, CohomologyClass, DegreeCohomology,
    Exactness, Presentation, Surjectivity,
};
pub(crate) use graded_algebra::to_sparse;
pub use graded_algebra::GradedAlgebra;
