//! Grids, transforms, Fourier multipliers, norms and Littlewood–Paley
//! projections.

pub mod field;
pub mod grid;
pub mod norms;
pub mod ops;
pub mod params;
pub mod symbol;
pub mod transform;

pub use field::{Field, SpectralField};
pub use grid::{make_grid, Grid, GridKind};
pub use norms::{inner, l2_norm_sq, lebesgue_norm, sobolev_norm};
pub use ops::{apply_chain, apply_multiplier, i_apply, laplacian, lp_project, LpMode};
pub use params::PhysParams;
pub use symbol::{chi, eval_symbol, i_symbol, lp_symbol, psi, MultiplierSpec};
pub use transform::{gradient, gradient_magnitude, inverse_transform, transform};

/// `‖∇f‖₂ = GRADIENT_SCALE · ‖f‖_{Ḣ¹}` under the `e^{-2πi x·ξ}` convention.
pub const GRADIENT_SCALE: f64 = 2.0 * std::f64::consts::PI;
