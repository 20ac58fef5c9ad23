//! Markovian dynamics: Bloch equations, GKS/Lindblad generators and the
//! damping-basis solution of the master equation.

mod damping;
mod integrate;
mod lindblad;
mod params;

pub use damping::{
    composition_defect, damping_basis, evolve_by_damping_basis, semigroup_check, DampingBasis,
    SemigroupReport,
};
pub use integrate::{bloch_rhs, integrate_bloch, BlochTrace};
pub use lindblad::{generator_matrix, lindblad_apply, LindbladGenerator};
pub use params::{preset_rates, BlochParams, Preset, PresetRates};
