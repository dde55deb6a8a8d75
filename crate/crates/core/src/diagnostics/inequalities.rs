//! Measured ratios for the classical harmonic-analysis inequalities. Each
//! returns `LHS / RHS`; suites record the largest ratio as the empirical
//! constant.

use super::{modified_energy, weighted_mass};
use crate::dynamics::CoupledState;
use crate::error::{param, Error, Result};
use crate::spectral::{i_apply, lebesgue_norm, lp_project, sobolev_norm, Field, LpMode};

fn ratio(num: f64, den: f64, what: &str) -> Result<f64> {
    if den > 0.0 {
        Ok(num / den)
    } else {
        Err(Error::Insufficient(format!("{what} vanishes")))
    }
}

/// `‖P_j f‖_p / (2^{3j(1/2−1/p)} ‖P_j f‖₂)` for `2 ≤ p ≤ ∞`.
pub fn bernstein_ratio(f: &Field, j: i32, p: f64) -> Result<f64> {
    if p.is_nan() || p < 2.0 {
        return Err(param("p", format!("Bernstein requires p >= 2, got {p}")));
    }
    let pj = lp_project(f, LpMode::Band { j });
    let gain = 2f64.powf(3.0 * j as f64 * (0.5 - 1.0 / p));
    ratio(lebesgue_norm(&pj, p)?, gain * lebesgue_norm(&pj, 2.0)?, "band")
}

/// `‖f‖_p / ‖f‖_{Ḣ^σ}` with `σ = 3(1/2 − 1/p)`, `2 ≤ p < ∞`.
pub fn sobolev_embedding_ratio(f: &Field, p: f64) -> Result<f64> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(param("p", format!("embedding requires 2 <= p < inf, got {p}")));
    }
    let sigma = 3.0 * (0.5 - 1.0 / p);
    ratio(lebesgue_norm(f, p)?, sobolev_norm(f, sigma, true)?, "field")
}

/// `sup_x |x|·|P_j f(x)| / ‖P_j f‖_{Ḣ^{1/2}}`.
pub fn radial_embedding_ratio(f: &Field, j: i32) -> Result<f64> {
    let pj = lp_project(f, LpMode::Band { j });
    let sup = pj
        .samples()
        .iter()
        .zip(pj.grid().radii())
        .map(|(z, &r)| r * z.norm())
        .fold(0.0, f64::max);
    ratio(sup, sobolev_norm(&pj, 0.5, true)?, "band")
}

/// `(‖u‖²_{H^s} + ‖v‖²_{H^s}) / (E_w(Iu, Iv) + M_w)`.
pub fn hs_control_ratio(state: &CoupledState, threshold: f64, s: f64) -> Result<f64> {
    let hs = sobolev_norm(state.u(), s, false)?.powi(2) + sobolev_norm(state.v(), s, false)?.powi(2);
    let control = modified_energy(state, threshold, s)? + weighted_mass(state);
    ratio(hs, control, "control quantity")
}

/// `(‖If‖_{H¹}/‖f‖_{H^s}, ‖f‖_{H^s}/‖If‖_{H¹})`.
pub fn i_sandwich(f: &Field, threshold: f64, s: f64) -> Result<(f64, f64)> {
    let i_f = i_apply(f, threshold, s)?;
    let h1 = sobolev_norm(&i_f, 1.0, false)?;
    let hs = sobolev_norm(f, s, false)?;
    Ok((ratio(h1, hs, "field")?, ratio(hs, h1, "field")?))
}

/// Least-squares slope of `ln y` against `ln x` over the positive pairs;
/// `None` with fewer than two usable points.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::{band_limited, gaussian};
    use crate::spectral::{Grid, PhysParams};
    use proptest::prelude::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [4.0, 8.0, 16.0, 32.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.8)).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() + 0.8).abs() < 1e-12);
        assert_eq!(loglog_slope(&[1.0], &[1.0]), None);
        assert_eq!(loglog_slope(&[1.0, 2.0], &[0.0, 0.0]), None);
    }

    #[test]
    fn ratios_are_finite_on_smooth_data() {
        let grid = Grid::radial(16.0, 1024).unwrap();
        let g = gaussian(&grid, 1.0, 0.5).unwrap();
        for p in [2.0, 4.0, f64::INFINITY] {
            let b = bernstein_ratio(&g, 0, p).unwrap();
            assert!(b.is_finite() && b > 0.0);
        }
        assert!((bernstein_ratio(&g, 0, 2.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(sobolev_embedding_ratio(&g, 3.0).unwrap().is_finite());
        assert!(radial_embedding_ratio(&g, 1).unwrap().is_finite());
        let s = CoupledState::new(g.clone(), g.clone(), PhysParams::default()).unwrap();
        assert!(hs_control_ratio(&s, 2.0, 0.75).unwrap().is_finite());
        let (up, down) = i_sandwich(&g, 2.0, 0.75).unwrap();
        assert!((up * down - 1.0).abs() < 1e-12);
        assert!(bernstein_ratio(&g, 0, 1.5).is_err());
        assert!(bernstein_ratio(&g, 40, 4.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn bernstein_ratio_is_bounded(seed in 0u64..1000, j in -1i32..3) {
            let grid = Grid::radial(16.0, 512).unwrap();
            let f = band_limited(&grid, 1.0, 2f64.powi(j + 1), seed).unwrap();
            let r = bernstein_ratio(&f, j, 4.0).unwrap();
            prop_assert!(r.is_finite() && r < 10.0);
        }
    }
}
