use num_complex::Complex64;

use super::field::Field;
use super::transform::{radial_value_at_origin, transform};
use crate::error::{param, Result};

/// `∫ conj(a) b dx` with the grid quadrature weights.
pub fn inner(a: &Field, b: &Field) -> Result<Complex64> {
    a.check_same_grid(b)?;
    Ok(a.samples()
        .iter()
        .zip(b.samples())
        .zip(a.grid().space_weights())
        .map(|((x, y), w)| x.conj() * y * w)
        .sum())
}

pub fn l2_norm_sq(f: &Field) -> f64 {
    f.samples()
        .iter()
        .zip(f.grid().space_weights())
        .map(|(z, w)| w * z.norm_sqr())
        .sum()
}

/// `∫ g(|f|) dx` for a pointwise density.
pub(crate) fn integrate_density(f: &Field, density: impl Fn(f64) -> f64) -> f64 {
    f.samples()
        .iter()
        .zip(f.grid().space_weights())
        .map(|(z, w)| w * density(z.norm()))
        .sum()
}

/// Sup norm; on radial grids the origin value is included through spectral
/// evaluation since the samples exclude `r = 0`.
pub(crate) fn sup_norm(f: &Field) -> f64 {
    let interior = f.max_abs();
    if f.grid().is_radial() {
        interior.max(radial_value_at_origin(&transform(f)).norm())
    } else {
        interior
    }
}

/// `‖f‖_{L^p}` for `1 ≤ p ≤ ∞` (`f64::INFINITY` for the sup norm).
pub fn lebesgue_norm(f: &Field, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(param("p", format!("Lebesgue exponent must satisfy p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(sup_norm(f));
    }
    if p == 2.0 {
        return Ok(l2_norm_sq(f).sqrt());
    }
    Ok(integrate_density(f, |a| a.powf(p)).powf(1.0 / p))
}

/// Homogeneous `‖|ξ|^s f̂‖` or inhomogeneous `‖(1+|ξ|²)^{s/2} f̂‖`.
pub fn sobolev_norm(f: &Field, s: f64, homogeneous: bool) -> Result<f64> {
    if !(-2.0..=2.0).contains(&s) {
        return Err(param("s", format!("Sobolev exponent must lie in [-2, 2], got {s}")));
    }
    Ok(sobolev_norm_sq_spectral(&transform(f), s, homogeneous).sqrt())
}

pub(crate) fn sobolev_norm_sq_spectral(
    spec: &super::field::SpectralField,
    s: f64,
    homogeneous: bool,
) -> f64 {
    let grid = spec.grid();
    let mut total = 0.0;
    for ((c, &xi), &w) in spec
        .coeffs()
        .iter()
        .zip(grid.freq_magnitudes())
        .zip(grid.freq_weights())
    {
        let weight = if homogeneous {
            if xi == 0.0 {
                if s == 0.0 {
                    1.0
                } else if s > 0.0 || c.norm_sqr() == 0.0 {
                    0.0
                } else {
                    return f64::INFINITY;
                }
            } else {
                xi.powf(2.0 * s)
            }
        } else {
            (1.0 + xi * xi).powf(s)
        };
        total += w * weight * c.norm_sqr();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use crate::spectral::transform::inverse_transform;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn gaussian(grid: &Grid) -> Field {
        Field::from_radial_fn(grid, |r| Complex64::new((-PI * r * r).exp(), 0.0)).unwrap()
    }

    #[test]
    fn gaussian_norms_match_closed_forms() {
        let grid = Grid::radial(32.0, 2048).unwrap();
        let g = gaussian(&grid);
        // ∫ e^{-2π|x|²} dx = 2^{-3/2}
        assert!((lebesgue_norm(&g, 2.0).unwrap() - 2f64.powf(-0.75)).abs() < 1e-6);
        assert!((lebesgue_norm(&g, f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
        // ∫ |ξ| e^{-2π|ξ|²} dξ = 1/(2π)
        let h = sobolev_norm(&g, 0.5, true).unwrap();
        assert!((h - (2.0 * PI).powf(-0.5)).abs() < 1e-5);
        // ‖g‖_4^4 = 1/8
        assert!((lebesgue_norm(&g, 4.0).unwrap().powi(4) - 0.125).abs() < 1e-10);
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let grid = Grid::periodic(2.0, 8).unwrap();
        let z = Field::zeros(&grid);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(lebesgue_norm(&z, p).unwrap(), 0.0);
        }
        assert!(lebesgue_norm(&z, 0.5).is_err());
    }

    #[test]
    fn s_zero_sobolev_is_l2() {
        let grid = Grid::radial(8.0, 256).unwrap();
        let g = gaussian(&grid);
        let a = sobolev_norm(&g, 0.0, true).unwrap();
        let b = sobolev_norm(&g, 0.0, false).unwrap();
        let c = lebesgue_norm(&g, 2.0).unwrap();
        assert!((a - c).abs() < 1e-12 && (b - c).abs() < 1e-12);
        assert!(sobolev_norm(&g, 2.5, true).is_err());
    }

    #[test]
    fn inhomogeneous_dominates() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let grid = Grid::radial(4.0, 128).unwrap();
        for _ in 0..100 {
            let s: f64 = rng.gen_range(0.0..2.0);
            let samples = (0..grid.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let f = Field::new(grid.clone(), samples).unwrap();
            let hs = sobolev_norm(&f, s, false).unwrap();
            assert!(hs >= sobolev_norm(&f, s, true).unwrap() * (1.0 - 1e-12));
            assert!(hs >= lebesgue_norm(&f, 2.0).unwrap() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn parseval_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for grid in [Grid::radial(3.0, 64).unwrap(), Grid::periodic(3.0, 8).unwrap()] {
            let samples = (0..grid.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let f = Field::new(grid.clone(), samples).unwrap();
            let spec = transform(&f);
            let rel = (spec.norm_sq() - l2_norm_sq(&f)).abs() / l2_norm_sq(&f);
            assert!(rel <= 1e-12);
            let back = inverse_transform(&spec);
            assert!((l2_norm_sq(&back) - l2_norm_sq(&f)).abs() <= 1e-12 * l2_norm_sq(&f));
        }
    }
}
