use crate::dynamics::CoupledState;
use crate::error::Result;
use crate::spectral::ops::check_i_params;
use crate::spectral::symbol::i_symbol;
use crate::spectral::{inverse_transform, l2_norm_sq, transform, Field, PhysParams, SpectralField, GRADIENT_SCALE};

/// `M_w = μ‖u‖₂² + λ‖v‖₂²`.
pub fn weighted_mass(state: &CoupledState) -> f64 {
    let p = state.params();
    p.mu * l2_norm_sq(state.u()) + p.lambda * l2_norm_sq(state.v())
}

/// `‖∇f‖₂²` from the spectrum.
pub(crate) fn gradient_sq(spec: &SpectralField) -> f64 {
    let grid = spec.grid();
    let sum: f64 = spec
        .coeffs()
        .iter()
        .zip(grid.freq_magnitudes())
        .zip(grid.freq_weights())
        .map(|((c, &xi), &w)| w * xi * xi * c.norm_sqr())
        .sum();
    GRADIENT_SCALE * GRADIENT_SCALE * sum
}

pub(crate) fn quartic_coupling(u: &Field, v: &Field) -> f64 {
    u.samples()
        .iter()
        .zip(v.samples())
        .zip(u.grid().space_weights())
        .map(|((a, b), w)| w * a.norm_sqr() * b.norm_sqr())
        .sum()
}

pub(crate) fn energy_from_parts(
    params: &PhysParams,
    u_hat: &SpectralField,
    v_hat: &SpectralField,
    u: &Field,
    v: &Field,
) -> f64 {
    0.5 * (params.mu * gradient_sq(u_hat)
        + params.lambda * gradient_sq(v_hat)
        + params.lambda * params.mu * quartic_coupling(u, v))
}

/// `E_w = ½∫[μ|∇u|² + λ|∇v|² + λμ|u|²|v|²] dx`.
pub fn weighted_energy(state: &CoupledState) -> f64 {
    energy_from_parts(
        state.params(),
        &transform(state.u()),
        &transform(state.v()),
        state.u(),
        state.v(),
    )
}

/// `E_w(Iu, Iv)`.
pub fn modified_energy(state: &CoupledState, threshold: f64, s: f64) -> Result<f64> {
    check_i_params(threshold, s)?;
    let symbol = |xi: f64| i_symbol(xi, threshold, s).into();
    let iu_hat = transform(state.u()).multiply(symbol);
    let iv_hat = transform(state.v()).multiply(symbol);
    let iu = inverse_transform(&iu_hat);
    let iv = inverse_transform(&iv_hat);
    Ok(energy_from_parts(state.params(), &iu_hat, &iv_hat, &iu, &iv))
}
