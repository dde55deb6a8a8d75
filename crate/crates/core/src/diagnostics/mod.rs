//! Conserved and almost-conserved quantities, commutator derivatives, the
//! interaction Morawetz potential, and space-time norms.

mod commutator;
mod energy;
mod inequalities;
mod morawetz;
mod record;
mod spacetime;

pub use commutator::{
    commutator_decomposition, commutator_field, modified_energy_derivative, CommutatorTerms,
    DerivativeWorkspace, Side,
};
pub use energy::{modified_energy, weighted_energy, weighted_mass};
pub use inequalities::{
    bernstein_ratio, hs_control_ratio, i_sandwich, loglog_slope, radial_embedding_ratio,
    sobolev_embedding_ratio,
};
pub use morawetz::{morawetz_potential, morawetz_rate, morawetz_scale, MORAWETZ_MAX_N};
pub use record::DiagnosticsRecord;
pub use spacetime::{
    interaction_functional, interaction_integrand, slab_norm, spacetime_norm, xr_norm, NormChain,
};
