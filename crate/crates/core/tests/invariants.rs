use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use nls_core::diagnostics::{weighted_energy, weighted_mass};
use nls_core::dynamics::{free_propagate, rescale, CoupledState, StrangStepper};
use nls_core::initial::{band_limited, boosted_gaussian, gaussian};
use nls_core::spectral::{inverse_transform, l2_norm_sq, sobolev_norm, transform, Grid, PhysParams};

/// Composite Simpson rule on [0, b] with `m` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, b: f64, m: usize) -> f64 {
    let h = b / m as f64;
    let mut acc = f(0.0) + f(b);
    for k in 1..m {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn gaussian_mass_matches_quadrature() {
    let grid = Grid::radial(16.0, 1024).unwrap();
    for (a, w) in [(1.0, 1.0), (0.7, 0.5), (2.0, 2.0)] {
        let g = gaussian(&grid, a, w).unwrap();
        let oracle = simpson(|r| 4.0 * PI * r * r * a * a * (-2.0 * PI * r * r / (w * w)).exp(), 16.0, 20_000);
        assert_relative_eq!(l2_norm_sq(&g), oracle, max_relative = 1e-10);
    }
}

#[test]
fn free_gaussian_matches_closed_form() {
    // e^{itΔ} e^{-π|x|²} = (1 + 4πit)^{-3/2} exp(-π|x|² / (1 + 4πit)).
    let grid = Grid::radial(24.0, 2048).unwrap();
    let g = gaussian(&grid, 1.0, 1.0).unwrap();
    let t = 0.3;
    let evolved = free_propagate(&g, t);
    let z = Complex64::new(1.0, 4.0 * PI * t);
    for (k, &r) in grid.radii().iter().enumerate().step_by(37) {
        let exact = z.powf(-1.5) * (-PI * r * r / z).exp();
        assert!((evolved.samples()[k] - exact).norm() < 1e-10, "r={r}");
    }
}

#[test]
fn rescaling_preserves_half_derivative_norm() {
    let grid = Grid::radial(32.0, 1024).unwrap();
    let g = gaussian(&grid, 1.0, 1.0).unwrap();
    let s = CoupledState::new(g.clone(), g.scale(0.5.into()), PhysParams::default()).unwrap();
    let r = rescale(&s, 4.0).unwrap();
    for (a, b) in [(s.u(), r.u()), (s.v(), r.v())] {
        assert_relative_eq!(
            sobolev_norm(a, 0.5, true).unwrap(),
            sobolev_norm(b, 0.5, true).unwrap(),
            max_relative = 1e-9
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_is_unitary(seed in 0u64..1000, band in 1.0f64..6.0) {
        let grid = Grid::radial(12.0, 256).unwrap();
        let f = band_limited(&grid, 1.0, band, seed).unwrap();
        let fhat = transform(&f);
        prop_assert!((fhat.norm_sq() - l2_norm_sq(&f)).abs() <= 1e-12 * l2_norm_sq(&f));
        let back = inverse_transform(&fhat);
        prop_assert!(back.sub(&f).unwrap().max_abs() <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn free_flow_is_reversible(t in -0.5f64..0.5, kick in -1.0f64..1.0) {
        let grid = Grid::periodic(6.0, 12).unwrap();
        let f = boosted_gaussian(&grid, 1.0, 1.2, [kick, 0.0, -kick]).unwrap();
        let g = free_propagate(&f, t);
        prop_assert!((l2_norm_sq(&g) - l2_norm_sq(&f)).abs() <= 1e-12 * l2_norm_sq(&f));
        prop_assert!(free_propagate(&g, -t).sub(&f).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn strang_conserves_weighted_mass(
        amp in 0.1f64..2.0,
        width in 0.5f64..2.0,
        lambda in 0.1f64..3.0,
        mu in 0.1f64..3.0,
    ) {
        let grid = Grid::radial(16.0, 256).unwrap();
        let params = PhysParams::new(lambda, mu, 0.75, 16.0).unwrap();
        let s0 = CoupledState::new(
            gaussian(&grid, amp, width).unwrap(),
            gaussian(&grid, 0.5 * amp, 1.3 * width).unwrap(),
            params,
        ).unwrap();
        let stepper = StrangStepper::new(&grid, params, 5e-3).unwrap();
        let mut s = s0.clone();
        for _ in 0..20 {
            s = stepper.step(&s).unwrap();
        }
        let (m0, m1) = (weighted_mass(&s0), weighted_mass(&s));
        prop_assert!((m1 - m0).abs() <= 1e-12 * m0);
        prop_assert!(weighted_energy(&s).is_finite() && weighted_energy(&s) >= 0.0);
    }
}
