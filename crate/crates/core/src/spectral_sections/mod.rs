//! Spectral sections for small R: classification of the minimal systems,
//! explicit projector fields in both cases, and the integer invariants used
//! to certify them (relative degree on a disc, Chern number on a torus,
//! differences in K(B) ≅ ℤ⊕ℤ).

mod classify;
mod field;
mod nontrivial;
mod topology;
mod trivial;
mod verify;

pub use classify::{
    classify_small_r, epsilon_bound, k_difference, minimal_representative, Classification,
    CosetDegree, KDifference, RankClass, SectionClass, SectionDescriptor,
};
pub use field::{CMatrix, FieldGrid, ProjectorField};
pub use nontrivial::{build_projector_field_nontrivial, build_projector_field_nontrivial_grid, pinch_map};
pub use topology::{chern_number, relative_degree, solid_angle};
pub use trivial::{
    boundary_projector, boundary_projector_in, bubble_continuation, build_projector_field_trivial,
    polar_disc_field, BubbleContinuation, DISC_OVERSHOOT, MIN_RINGS,
};
pub use verify::{build_sections, verify_spectral_section, VerifyReport};

/// Tolerance for P² = P and P† = P at every sample.
pub const PROJECTOR_TOL: f64 = 1e-10;
/// Tolerance for the distance of a degree or Chern sum to the nearest integer.
pub const ROUNDING_TOL: f64 = 0.02;
