//! Bigraded, filtered, minimal and relative models.

pub mod bigraded;
pub mod filtered;
pub mod minimal;
pub mod relative;

pub use bigraded::{
    bigraded_model, complete_seeded, lower_homology_dim, relative_bigraded_model, Augmentation,
    BigradedModel,
};
pub use filtered::{filtered_model, filtered_model_from, has_lower_grading, FilteredModel};
pub use minimal::{minimal_model, MinimalModel};
pub use relative::{base_part, fiber_part, RelativeModel};
