use std::f64::consts::PI;

use super::CoupledState;
use crate::spectral::{apply_multiplier, l2_norm_sq, sobolev_norm, Field, MultiplierSpec};

/// `e^{itΔ} f`, exactly unitary on the grid.
pub fn free_propagate(field: &Field, t: f64) -> Field {
    if t == 0.0 {
        return field.clone();
    }
    apply_multiplier(field, &MultiplierSpec::SchrodingerPhase { t })
}

/// Time before the bulk of the solution reaches the domain edge.
///
/// Uses the RMS frequency `ρ = ‖f‖_{Ḣ¹}/‖f‖₂` of each component and the
/// group speed `4πρ` of `e^{itΔ}`: `T_safe = max_radius / (2 · 4πρ)`.
/// Zero data never leaves, so the horizon is infinite.
pub fn safe_horizon(state: &CoupledState) -> f64 {
    let mut rho: f64 = 0.0;
    for f in [state.u(), state.v()] {
        let mass = l2_norm_sq(f);
        if mass > 0.0 {
            let h1 = sobolev_norm(f, 1.0, true).expect("s = 1 is admissible");
            rho = rho.max(h1 / mass.sqrt());
        }
    }
    if rho == 0.0 {
        return f64::INFINITY;
    }
    state.grid().max_radius() / (2.0 * 4.0 * PI * rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::gaussian;
    use crate::spectral::{Grid, PhysParams};
    use num_complex::Complex64;

    fn exact_free_gaussian(r: f64, t: f64) -> Complex64 {
        let z = Complex64::new(1.0, 4.0 * PI * t);
        z.powf(-1.5) * (-(PI * r * r) / z).exp()
    }

    #[test]
    fn gaussian_matches_closed_form() {
        let grid = Grid::radial(32.0, 2048).unwrap();
        let g = gaussian(&grid, 1.0, 1.0).unwrap();
        // Beyond t ≈ R/32 the spreading tail reaches the wall and reflects.
        for t in [0.0, 0.1, 0.5, 1.0] {
            let p = free_propagate(&g, t);
            let err = p
                .samples()
                .iter()
                .zip(grid.radii())
                .map(|(z, &r)| (z - exact_free_gaussian(r, t)).norm())
                .fold(0.0, f64::max);
            assert!(err <= 1e-8, "t={t} err={err}");
        }
    }

    #[test]
    fn unitary_and_group_law() {
        let grid = Grid::periodic(6.0, 16).unwrap();
        let g = gaussian(&grid, 1.0, 1.2).unwrap();
        let m0 = l2_norm_sq(&g);
        let a = free_propagate(&free_propagate(&g, 0.3), 0.45);
        let b = free_propagate(&g, 0.75);
        assert!(((l2_norm_sq(&b) - m0) / m0).abs() <= 1e-13);
        let diff = a.sub(&b).unwrap().max_abs();
        assert!(diff <= 1e-12);
    }

    #[test]
    fn horizon_of_zero_data_is_infinite() {
        let grid = Grid::radial(8.0, 64).unwrap();
        let z = Field::zeros(&grid);
        let s = CoupledState::new(z.clone(), z, PhysParams::default()).unwrap();
        assert!(safe_horizon(&s).is_infinite());
    }

    #[test]
    fn horizon_of_unit_gaussian() {
        let grid = Grid::radial(128.0, 2048).unwrap();
        let g = gaussian(&grid, 0.1, 1.0).unwrap();
        let s = CoupledState::new(g.clone(), g, PhysParams::default()).unwrap();
        // ρ_rms² = 3/(4π) for e^{-π r²}
        let expect = 128.0 / (8.0 * PI * (3.0 / (4.0 * PI)).sqrt());
        assert!((safe_horizon(&s) - expect).abs() < 1e-6 * expect);
    }
}
