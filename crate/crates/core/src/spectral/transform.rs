//! Unitary transforms between [`Field`] and [`SpectralField`].
//!
//! Radial backend: with `U(r) = r u(r)` the 3D radial Fourier transform
//! under the `e^{-2πi x·ξ}` convention is
//! `ρ û(ρ) = 2 ∫ U(r) sin(2πρr) dr`, which on `r_j = jR/n`, `ρ_k = k/(2R)`
//! is a DST-I with kernel `sin(πjk/n)`. The DST is evaluated through a
//! complex FFT of the odd extension of length `2n`.
//!
//! Periodic backend: `f̂(m/L) ≈ (L/n)^3 Σ_j f_j e^{-2πi m·j/n}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::{Field, SpectralField};
use super::grid::{Grid, GridKind};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Forward transform. Fields are finite by construction, so this is total.
pub fn transform(field: &Field) -> SpectralField {
    let grid = field.grid();
    match grid.kind() {
        GridKind::Radial1D { .. } => {
            let dr = grid.spacing();
            let weighted: Vec<Complex64> = field
                .samples()
                .iter()
                .zip(grid.radii())
                .map(|(&u, &r)| u * r)
                .collect();
            let mut coeffs = sine_sum(grid, &weighted);
            for (c, &rho) in coeffs.iter_mut().zip(grid.freq_magnitudes()) {
                *c *= 2.0 * dr / rho;
            }
            SpectralField::from_raw(grid.clone(), coeffs)
        }
        GridKind::Periodic3D { .. } => {
            let mut data = field.samples().to_vec();
            fft3(grid, &mut data, false);
            let dv = grid.space_weights()[0];
            data.iter_mut().for_each(|c| *c *= dv);
            SpectralField::from_raw(grid.clone(), data)
        }
    }
}

pub fn inverse_transform(spectral: &SpectralField) -> Field {
    let grid = spectral.grid();
    match grid.kind() {
        GridKind::Radial1D { .. } => {
            let drho = grid.freq_spacing();
            let weighted: Vec<Complex64> = spectral
                .coeffs()
                .iter()
                .zip(grid.freq_magnitudes())
                .map(|(&c, &rho)| c * rho)
                .collect();
            let mut samples = sine_sum(grid, &weighted);
            for (u, &r) in samples.iter_mut().zip(grid.radii()) {
                *u *= 2.0 * drho / r;
            }
            Field::from_raw(grid.clone(), samples)
        }
        GridKind::Periodic3D { .. } => {
            let mut data = spectral.coeffs().to_vec();
            fft3(grid, &mut data, true);
            let dk = grid.freq_weights()[0];
            data.iter_mut().for_each(|c| *c *= dk);
            Field::from_raw(grid.clone(), data)
        }
    }
}

/// `S_k = Σ_{j=1}^{n-1} x_j sin(πjk/n)` for `k = 1..n-1`.
pub(crate) fn sine_sum(grid: &Grid, x: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    let mut buf = vec![ZERO; 2 * n];
    for (j, &v) in x.iter().enumerate() {
        buf[j + 1] = v;
        buf[2 * n - j - 1] = -v;
    }
    grid.forward_plan().process(&mut buf);
    // FFT of the odd extension is -2i S_k.
    buf[1..n].iter().map(|&z| 0.5 * I * z).collect()
}

/// `C_j = Σ_{k=1}^{n-1} y_k cos(πjk/n)` for `j = 1..n-1`.
pub(crate) fn cosine_sum(grid: &Grid, y: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    let mut buf = vec![ZERO; 2 * n];
    for (k, &v) in y.iter().enumerate() {
        buf[k + 1] = v;
        buf[2 * n - k - 1] = v;
    }
    grid.forward_plan().process(&mut buf);
    buf[1..n].iter().map(|&z| 0.5 * z).collect()
}

/// In-place unnormalized 3D FFT over an `n^3` row-major cube.
pub(crate) fn fft3(grid: &Grid, data: &mut [Complex64], inverse: bool) {
    let n = grid.n();
    let plan = if inverse {
        grid.inverse_plan()
    } else {
        grid.forward_plan()
    };
    // Last axis is contiguous.
    plan.process(data);
    let mut line = vec![ZERO; n];
    for i0 in 0..n {
        for i2 in 0..n {
            for i1 in 0..n {
                line[i1] = data[(i0 * n + i1) * n + i2];
            }
            plan.process(&mut line);
            for i1 in 0..n {
                data[(i0 * n + i1) * n + i2] = line[i1];
            }
        }
    }
    for i1 in 0..n {
        for i2 in 0..n {
            for i0 in 0..n {
                line[i0] = data[(i0 * n + i1) * n + i2];
            }
            plan.process(&mut line);
            for i0 in 0..n {
                data[(i0 * n + i1) * n + i2] = line[i0];
            }
        }
    }
}

/// Spectral evaluation of a radial field at `r = 0`: `u(0) = ∫ û(ξ) dξ`.
pub fn radial_value_at_origin(spectral: &SpectralField) -> Complex64 {
    let grid = spectral.grid();
    spectral
        .coeffs()
        .iter()
        .zip(grid.freq_weights())
        .map(|(&c, &w)| c * w)
        .sum()
}

/// Physical gradient components: `∂_r u` on radial grids (one component),
/// `(∂_1, ∂_2, ∂_3) u` on periodic grids. The periodic Nyquist plane is
/// differentiated to zero so real fields have real derivatives.
pub fn gradient(field: &Field) -> Vec<Field> {
    let grid = field.grid();
    let spectral = transform(field);
    match grid.kind() {
        GridKind::Radial1D { .. } => {
            let drho = grid.freq_spacing();
            // V_k = ρ_k û_k;  U(r) = 2Δρ Σ V_k sin(2πρ_k r).
            let v: Vec<Complex64> = spectral
                .coeffs()
                .iter()
                .zip(grid.freq_magnitudes())
                .map(|(&c, &rho)| c * rho)
                .collect();
            let dv: Vec<Complex64> = v
                .iter()
                .zip(grid.freq_magnitudes())
                .map(|(&c, &rho)| c * (2.0 * PI * rho))
                .collect();
            let big_u = sine_sum(grid, &v);
            let big_du = cosine_sum(grid, &dv);
            let samples = big_u
                .iter()
                .zip(&big_du)
                .zip(grid.radii())
                .map(|((&uu, &du), &r)| (2.0 * drho) * (du / r - uu / (r * r)))
                .collect();
            vec![Field::from_raw(grid.clone(), samples)]
        }
        GridKind::Periodic3D { n, .. } => (0..3)
            .map(|axis| {
                let mut coeffs = spectral.coeffs().to_vec();
                for (idx, c) in coeffs.iter_mut().enumerate() {
                    let m = super::grid::unravel(idx, n)[axis];
                    if m == n / 2 {
                        *c = ZERO;
                    } else {
                        let xi = grid.freq_vector(idx)[axis];
                        *c *= I * (2.0 * PI * xi);
                    }
                }
                inverse_transform(&SpectralField::from_raw(grid.clone(), coeffs))
            })
            .collect(),
    }
}

/// Pointwise |∇f| as a real-valued field.
pub fn gradient_magnitude(field: &Field) -> Field {
    let comps = gradient(field);
    let samples = (0..field.len())
        .map(|i| {
            let s: f64 = comps.iter().map(|c| c.samples()[i].norm_sqr()).sum();
            Complex64::new(s.sqrt(), 0.0)
        })
        .collect();
    Field::from_raw(field.grid().clone(), samples)
}
