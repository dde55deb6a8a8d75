use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::symbol::{psi, MultiplierSpec};
use super::transform::{inverse_transform, transform};
use crate::error::{param, Result};

/// Transform, multiply by the symbol at every grid frequency, transform back.
pub fn apply_multiplier(field: &Field, spec: &MultiplierSpec) -> Field {
    inverse_transform(&transform(field).multiply(|xi| spec.eval(xi)))
}

/// Applies a product of symbols with a single transform pair.
pub fn apply_chain(field: &Field, specs: &[MultiplierSpec]) -> Field {
    if specs.is_empty() {
        return field.clone();
    }
    inverse_transform(
        &transform(field).multiply(|xi| specs.iter().map(|s| s.eval(xi)).product()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum LpMode {
    Band { j: i32 },
    Low { cutoff: f64 },
    High { cutoff: f64 },
}

/// `P_j f`, `P_{≤N} f` or `P_{>N} f = f - P_{≤N} f`.
pub fn lp_project(field: &Field, mode: LpMode) -> Field {
    match mode {
        LpMode::Band { j } => apply_multiplier(field, &MultiplierSpec::LittlewoodPaley { j }),
        LpMode::Low { cutoff } => low_pass(field, cutoff),
        LpMode::High { cutoff } => high_pass(field, cutoff),
    }
}

pub(crate) fn low_pass(field: &Field, cutoff: f64) -> Field {
    inverse_transform(&transform(field).multiply(|xi| psi(xi / cutoff).into()))
}

pub(crate) fn high_pass(field: &Field, cutoff: f64) -> Field {
    let low = low_pass(field, cutoff);
    field.zip_map(&low, |a, b| a - b).expect("same grid")
}

pub(crate) fn check_i_params(threshold: f64, s: f64) -> Result<()> {
    if !(s > 0.5 && s < 1.0) {
        return Err(param("s", format!("I-method requires 1/2 < s < 1, got {s}")));
    }
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(param("N", format!("threshold must be positive and finite, got {threshold}")));
    }
    Ok(())
}

/// The I-operator `Î f = m_N f̂`.
pub fn i_apply(field: &Field, threshold: f64, s: f64) -> Result<Field> {
    check_i_params(threshold, s)?;
    Ok(apply_multiplier(field, &MultiplierSpec::IOperator { threshold, s }))
}

/// Δf with the `e^{-2πi x·ξ}` convention: symbol `-4π²|ξ|²`.
pub fn laplacian(field: &Field) -> Field {
    inverse_transform(&transform(field).multiply(|xi| (-4.0 * PI * PI * xi * xi).into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use crate::spectral::norms::sobolev_norm;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_diff(a: &Field, b: &Field) -> f64 {
        a.samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn plane_wave(grid: &Grid, m: [f64; 3]) -> Field {
        let l = grid.kind().length();
        Field::from_position_fn(grid, |x| {
            Complex64::from_polar(1.0, 2.0 * PI * (m[0] * x[0] + m[1] * x[1] + m[2] * x[2]) / l)
        })
        .unwrap()
    }

    fn gaussian(grid: &Grid) -> Field {
        Field::from_radial_fn(grid, |r| Complex64::new((-PI * r * r).exp(), 0.0)).unwrap()
    }

    fn random_band_limited(grid: &Grid, band: f64, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zero = Field::zeros(grid);
        let mut spec = transform(&zero);
        for (c, &xi) in spec.coeffs_mut().iter_mut().zip(grid.freq_magnitudes()) {
            if xi <= band {
                *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        inverse_transform(&spec)
    }

    #[test]
    fn zero_time_phase_is_identity() {
        let grid = Grid::radial(16.0, 512).unwrap();
        let f = gaussian(&grid);
        let g = apply_multiplier(&f, &MultiplierSpec::SchrodingerPhase { t: 0.0 });
        assert!(max_diff(&f, &g) <= 1e-14);
    }

    #[test]
    fn low_pass_keeps_band_limited_fields() {
        let grid = Grid::periodic(8.0, 16).unwrap();
        let f = random_band_limited(&grid, 0.5, 3);
        let g = apply_multiplier(&f, &MultiplierSpec::LowPass { cutoff: 0.5 });
        assert!(max_diff(&f, &g) <= 1e-12);
    }

    #[test]
    fn fractional_power_on_plane_wave() {
        let grid = Grid::periodic(4.0, 16).unwrap();
        let m = [1.0, 2.0, -2.0];
        let f = plane_wave(&grid, m);
        let g = apply_multiplier(&f, &MultiplierSpec::FractionalPower { s: 2.0 });
        let scale = (1.0 + 4.0 + 4.0) / 16.0;
        assert!(max_diff(&f.scale(scale.into()), &g) <= 1e-12);
    }

    #[test]
    fn low_and_high_are_complements() {
        let grid = Grid::radial(8.0, 256).unwrap();
        let f = random_band_limited(&grid, 10.0, 11);
        let low = lp_project(&f, LpMode::Low { cutoff: 2.0 });
        let high = lp_project(&f, LpMode::High { cutoff: 2.0 });
        assert!(max_diff(&low.add(&high).unwrap(), &f) <= 1e-13);
    }

    #[test]
    fn band_projection_kills_far_plane_wave() {
        let grid = Grid::periodic(4.0, 16).unwrap();
        // |ξ| = 3/4 = 2^{-2} * 3
        let f = plane_wave(&grid, [3.0, 0.0, 0.0]);
        let p = lp_project(&f, LpMode::Band { j: -2 });
        assert!(p.max_abs() <= 1e-14);
    }

    #[test]
    fn bands_plus_low_block_reconstruct() {
        let grid = Grid::radial(8.0, 512).unwrap();
        let f = random_band_limited(&grid, 30.0, 5);
        let (jmin, jmax) = (-3, 7);
        let mut acc = lp_project(&f, LpMode::Low { cutoff: 2f64.powi(jmin - 1) });
        for j in jmin..=jmax {
            acc = acc.add(&lp_project(&f, LpMode::Band { j })).unwrap();
        }
        assert!(max_diff(&acc, &f) <= 1e-12);
    }

    #[test]
    fn i_operator_behaviour() {
        let grid = Grid::periodic(4.0, 16).unwrap();
        let f = random_band_limited(&grid, 0.75, 9);
        let g = i_apply(&f, 1.0, 0.75).unwrap();
        assert!(max_diff(&f, &g) <= 1e-12);
        // plane wave at |ξ| = 4N
        let w = plane_wave(&grid, [2.0, 0.0, 0.0]);
        let iw = i_apply(&w, 0.125, 0.75).unwrap();
        let expect = 4f64.powf(-0.25);
        assert!(max_diff(&w.scale(expect.into()), &iw) <= 1e-12);
        assert!(i_apply(&w, 1.0, 0.3).is_err());
        assert!(i_apply(&w, 0.0, 0.75).is_err());
    }

    #[test]
    fn i_maps_rough_gaussian_into_h1() {
        let grid = Grid::radial(32.0, 2048).unwrap();
        let f = gaussian(&grid);
        let ifl = i_apply(&f, 4.0, 0.75).unwrap();
        let h1 = sobolev_norm(&ifl, 1.0, true).unwrap();
        assert!(h1.is_finite() && h1 > 0.0);
    }

    #[test]
    fn multipliers_commute() {
        let grid = Grid::radial(8.0, 256).unwrap();
        let f = random_band_limited(&grid, 12.0, 21);
        let a = MultiplierSpec::IOperator { threshold: 2.0, s: 0.6 };
        let b = MultiplierSpec::SchrodingerPhase { t: 0.01 };
        let ab = apply_multiplier(&apply_multiplier(&f, &b), &a);
        let ba = apply_multiplier(&apply_multiplier(&f, &a), &b);
        assert!(max_diff(&ab, &ba) <= 1e-12);
    }
}
