//! Pseudospectral simulation and harmonic analysis for the coupled defocusing
//! cubic Schrödinger system
//!
//! ```text
//! i u_t + Δu = λ |v|² u,    i v_t + Δv = μ |u|² v,    x ∈ R³
//! ```
//!
//! with radial data. The crate is layered:
//!
//! - [`spectral`]: grids, unitary transforms, radial multipliers
//!   (fractional powers, Littlewood–Paley pieces, the I-operator,
//!   the free propagator) and Lebesgue/Sobolev norms.
//! - [`dynamics`]: Strang split-step evolution, Duhamel residuals and the
//!   scaling symmetry.
//! - [`diagnostics`]: weighted mass/energy, the modified energy and its
//!   commutator derivative, the interaction Morawetz potential, space-time
//!   norms and the `X_R` norm.
//! - [`scattering`]: back-propagated profiles, scattering reports,
//!   increment sweeps over the I-operator threshold and consistency harnesses.

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod initial;
pub mod scattering;
pub mod spectral;

pub use error::{Error, Result};
