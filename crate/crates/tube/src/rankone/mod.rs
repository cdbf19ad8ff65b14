//! Reconstruction along rank-one geodesics: scissors, shadows, and the
//! translation of small displacement.

pub mod reconstruct;
pub mod scissors;
pub mod shadow;

pub use reconstruct::{reconstruct_rankone, RankOneEstimate, RankOneOptions};
pub use scissors::{
    displacement_composed, displacement_formula, displacement_oracle, displacement_record, displacement_sweep,
    find_scissors, find_scissors_with_displacement, DisplacementRecord, Neighborhood, RankOneError, Scissors, Sweep,
};
pub use shadow::{
    displacement_continuity_probe, euclidean_shadow_epsilon, monotone_to_zero, shadow_continuity_probe, shadow_member,
    spherical_shadow_sample,
};
