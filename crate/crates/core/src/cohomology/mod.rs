//! Truncations, exact Z₂-graded cohomology, towers and inverse limits,
//! and the module structure over the Ω-variables.

mod groups;
mod tower;
mod truncation;
mod uncompleted;

pub use groups::{
    compute_cohomology, module_action, multiplication_map, restriction_map, subcomplex_cohomology, BlockCohomology,
    Cohomology, InducedMap, ParityPart,
};
pub use tower::{inverse_limit, omega_tower, InverseLimit, Tower, TowerLevel, STABILIZATION_WINDOW};
pub use truncation::{
    basic_subspace, invariant_subspace, operator_identity_residuals, truncate, ComplexSpec, RealLabel,
    TruncatedComplex, TruncationParams,
};
pub use uncompleted::{
    completed_vs_tensored_check, uncompleted_cohomology, BlockAction, ComparisonReport, ModuleStructure,
    ParityComparison, RankProfile, UncompletedLevel, UncompletedReport,
};

#[cfg(test)]
mod tests;
