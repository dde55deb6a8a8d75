//! Initial data families.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::spectral::{inverse_transform, l2_norm_sq, transform, Field, Grid, SpectralField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitialData {
    /// `A e^{-π|x|²/w²}` centred at the origin.
    Gaussian { amplitude: f64, width: f64 },
    /// Gaussian times `e^{2πi k·x}`; periodic grids only.
    BoostedGaussian {
        amplitude: f64,
        width: f64,
        kick: [f64; 3],
    },
    /// `A e^{2πi m·x/L}`; periodic grids only.
    PlaneWave { amplitude: f64, mode: [i64; 3] },
    /// Random coefficients on `|ξ| ≤ band`, normalized to `‖f‖₂ = amplitude`.
    BandLimited { amplitude: f64, band: f64, seed: u64 },
    /// `f̂(ξ) = A (1 + |ξ|²)^{-decay/2}`: rough data with a power-law tail.
    PowerLaw { amplitude: f64, decay: f64 },
}

impl InitialData {
    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        match *self {
            InitialData::Gaussian { amplitude, width } => gaussian(grid, amplitude, width),
            InitialData::BoostedGaussian {
                amplitude,
                width,
                kick,
            } => boosted_gaussian(grid, amplitude, width, kick),
            InitialData::PlaneWave { amplitude, mode } => plane_wave(grid, amplitude, mode),
            InitialData::BandLimited {
                amplitude,
                band,
                seed,
            } => band_limited(grid, amplitude, band, seed),
            InitialData::PowerLaw { amplitude, decay } => power_law(grid, amplitude, decay),
        }
    }
}

fn check_width(width: f64) -> Result<()> {
    if width.is_finite() && width > 0.0 {
        Ok(())
    } else {
        Err(param("width", format!("must be positive and finite, got {width}")))
    }
}

pub fn gaussian(grid: &Grid, amplitude: f64, width: f64) -> Result<Field> {
    check_width(width)?;
    let c = PI / (width * width);
    Field::from_radial_fn(grid, |r| Complex64::new(amplitude * (-c * r * r).exp(), 0.0))
}

pub fn boosted_gaussian(grid: &Grid, amplitude: f64, width: f64, kick: [f64; 3]) -> Result<Field> {
    check_width(width)?;
    let c = PI / (width * width);
    Field::from_position_fn(grid, |x| {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let phase = 2.0 * PI * (kick[0] * x[0] + kick[1] * x[1] + kick[2] * x[2]);
        Complex64::from_polar(amplitude * (-c * r2).exp(), phase)
    })
}

pub fn plane_wave(grid: &Grid, amplitude: f64, mode: [i64; 3]) -> Result<Field> {
    let l = grid.kind().length();
    Field::from_position_fn(grid, |x| {
        let phase = 2.0 * PI * (mode[0] as f64 * x[0] + mode[1] as f64 * x[1] + mode[2] as f64 * x[2]) / l;
        Complex64::from_polar(amplitude, phase)
    })
}

pub fn band_limited(grid: &Grid, amplitude: f64, band: f64, seed: u64) -> Result<Field> {
    if !(band.is_finite() && band > 0.0) {
        return Err(param("band", format!("must be positive and finite, got {band}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = transform(&Field::zeros(grid));
    let mut any = false;
    for (c, &xi) in spec.coeffs_mut().iter_mut().zip(grid.freq_magnitudes()) {
        if xi <= band {
            *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            any = true;
        }
    }
    if !any {
        return Err(Error::Insufficient(format!(
            "no grid frequency lies below band={band}"
        )));
    }
    let f = inverse_transform(&spec);
    let norm = l2_norm_sq(&f).sqrt();
    Ok(f.scale(Complex64::new(amplitude / norm, 0.0)))
}

pub fn power_law(grid: &Grid, amplitude: f64, decay: f64) -> Result<Field> {
    if !decay.is_finite() {
        return Err(param("decay", "must be finite"));
    }
    let coeffs = grid
        .freq_magnitudes()
        .iter()
        .map(|&xi| Complex64::new(amplitude * (1.0 + xi * xi).powf(-0.5 * decay), 0.0))
        .collect();
    Ok(inverse_transform(&SpectralField::new(grid.clone(), coeffs)?))
}
