use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::CoupledState;
use crate::diagnostics::modified_energy;
use crate::error::{param, Error, Result};
use crate::spectral::ops::check_i_params;
use crate::spectral::{l2_norm_sq, transform, Field, Grid};

fn check_scale(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(param("a", format!("scale factor must be positive and finite, got {a}")))
    }
}

/// Scaling symmetry `u_a(t, x) = a·u(a²t, ax)` (same for `v`).
///
/// The rescaled fields live on a grid of length `R/a` with the same `n`, so
/// the map is exact: samples are multiplied by `a` and time becomes `t/a²`.
/// Under this map `‖u_a‖_{Ḣ^σ} = a^{σ−1/2}‖u‖_{Ḣ^σ}`.
pub fn rescale(state: &CoupledState, a: f64) -> Result<CoupledState> {
    check_scale(a)?;
    let kind = state.grid().kind();
    let grid = Grid::new(kind.with_length(kind.length() / a))?;
    let relabel = |f: &Field| Field::new(grid.clone(), f.samples().iter().map(|z| z * a).collect());
    CoupledState::at_time(
        state.t() / (a * a),
        relabel(state.u())?,
        relabel(state.v())?,
        *state.params(),
    )
}

/// [`rescale`] followed by spectral interpolation onto `target` (radial
/// grids only). Points beyond the rescaled domain read zero; losing more
/// than 1% of the L² mass is an error.
pub fn rescale_onto(state: &CoupledState, a: f64, target: &Grid) -> Result<CoupledState> {
    if !(state.grid().is_radial() && target.is_radial()) {
        return Err(Error::BackendMismatch { required: "radial" });
    }
    let scaled = rescale(state, a)?;
    let before = l2_norm_sq(scaled.u()) + l2_norm_sq(scaled.v());
    let u = interpolate_radial(scaled.u(), target);
    let v = interpolate_radial(scaled.v(), target);
    let after = l2_norm_sq(&u) + l2_norm_sq(&v);
    if before > 0.0 {
        let fraction = ((before - after) / before).abs();
        if fraction > 1e-2 {
            return Err(Error::SupportLoss { fraction });
        }
    }
    CoupledState::at_time(scaled.t(), u, v, *state.params())
}

/// Evaluates the sine series of a radial field at the radii of `target`.
fn interpolate_radial(field: &Field, target: &Grid) -> Field {
    let src = field.grid();
    let radius = src.kind().length();
    let drho = src.freq_spacing();
    let spec = transform(field);
    let weights: Vec<(f64, Complex64)> = spec
        .coeffs()
        .iter()
        .zip(src.freq_magnitudes())
        .map(|(&c, &rho)| (rho, c * rho))
        .collect();
    let samples = target
        .radii()
        .par_iter()
        .map(|&r| {
            if r >= radius {
                return Complex64::new(0.0, 0.0);
            }
            let s: Complex64 = weights
                .iter()
                .map(|&(rho, c)| c * (2.0 * PI * rho * r).sin())
                .sum();
            s * (2.0 * drho / r)
        })
        .collect();
    Field::from_raw(target.clone(), samples)
}

/// Largest `a ∈ (0, 1]` (to bisection accuracy) with
/// `E_w(Iu_a, Iv_a) ≤ 1/2`.
pub fn choose_rescaling(state: &CoupledState, threshold: f64, s: f64) -> Result<f64> {
    check_i_params(threshold, s)?;
    let energy = |a: f64| -> Result<f64> { modified_energy(&rescale(state, a)?, threshold, s) };
    if energy(1.0)? <= 0.5 {
        return Ok(1.0);
    }
    let mut hi = 1.0f64;
    let mut lo = 0.5f64;
    let mut tries = 0;
    while energy(lo)? > 0.5 {
        hi = lo;
        lo *= 0.5;
        tries += 1;
        if tries > 200 {
            return Err(Error::Insufficient(
                "no admissible scale factor found above 2^-200".into(),
            ));
        }
    }
    for _ in 0..60 {
        let mid = (lo * hi).sqrt();
        if energy(mid)? <= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
