//! Cartan, Weil, extended and twisted models built from action data.

pub mod action;
pub mod bfield;
pub mod model;
pub mod presets;
pub mod three_form;

pub use action::{validate_extended_action, CheckEntry, ExtendedActionData, Geometry, Section, ValidationReport, VectorField};
pub use bfield::{b_field_transform, extended_to_twisted, invariant_splitting, transform_action, TorusRotation};
pub use model::{flip_omega, ModelContext, SignConvention};
pub use presets::{chevalley_eilenberg, instances, s1_cp};
pub use three_form::{cartan_map_j, cartan_map_j_ordered, check_basic_closed, weil_three_form, EquivariantThreeForm};
