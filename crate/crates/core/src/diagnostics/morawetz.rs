use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::CoupledState;
use crate::error::{Error, Result};
use crate::spectral::grid::{unravel, wrap_index};
use crate::spectral::{gradient, l2_norm_sq, laplacian, sobolev_norm, Field, Grid};

/// Largest periodic resolution accepted by the direct `O(n⁶)` double sum.
pub const MORAWETZ_MAX_N: usize = 24;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check(state: &CoupledState) -> Result<()> {
    let grid = state.grid();
    if grid.is_radial() {
        return Err(Error::BackendMismatch {
            required: "periodic3d",
        });
    }
    if grid.n() > MORAWETZ_MAX_N {
        return Err(Error::CostGuard {
            n: grid.n(),
            max: MORAWETZ_MAX_N,
        });
    }
    Ok(())
}

/// Unit vectors `(x−y)/|x−y|` indexed by the wrapped index offset `x−y`.
/// Offset components equal to `n/2` are equidistant both ways and
/// contribute zero, which keeps the table odd; the diagonal is zero.
fn direction_table(grid: &Grid) -> Vec<[f64; 3]> {
    let n = grid.n();
    (0..grid.len())
        .map(|idx| {
            let d = unravel(idx, n).map(|i| {
                let w = wrap_index(i, n);
                if w.unsigned_abs() as usize == n / 2 {
                    0.0
                } else {
                    w as f64
                }
            });
            let len = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if len == 0.0 {
                [0.0; 3]
            } else {
                d.map(|c| c / len)
            }
        })
        .collect()
}

/// `G(x) = Σ_y W q(y) d(x, y)` for each density, summed in a fixed order.
fn smear(grid: &Grid, table: &[[f64; 3]], densities: &[&[f64]]) -> Vec<Vec<[f64; 3]>> {
    let n = grid.n();
    let w = grid.space_weights()[0];
    (0..grid.len())
        .into_par_iter()
        .map(|x| {
            let xi = unravel(x, n);
            let mut acc = vec![[0.0; 3]; densities.len()];
            for y in 0..grid.len() {
                let yi = unravel(y, n);
                let off = ((xi[0] + n - yi[0]) % n * n + (xi[1] + n - yi[1]) % n) * n
                    + (xi[2] + n - yi[2]) % n;
                let d = table[off];
                for (a, q) in acc.iter_mut().zip(densities) {
                    let qy = q[y];
                    a[0] += qy * d[0];
                    a[1] += qy * d[1];
                    a[2] += qy * d[2];
                }
            }
            acc.into_iter().map(|a| a.map(|c| c * w)).collect()
        })
        .collect()
}

fn momentum(f: &Field, grad: &[Field]) -> Vec<[f64; 3]> {
    (0..f.len())
        .map(|j| {
            let c = f.samples()[j].conj();
            [0, 1, 2].map(|k| (c * grad[k].samples()[j]).im)
        })
        .collect()
}

fn densities(state: &CoupledState) -> (Vec<f64>, Vec<f64>) {
    let p = state.params();
    let ru: Vec<f64> = state.u().samples().iter().map(|z| z.norm_sqr()).collect();
    let rv: Vec<f64> = state.v().samples().iter().map(|z| z.norm_sqr()).collect();
    weights(p.lambda, p.mu, &ru, &rv)
}

/// `q_u = 2μ²ρ_u + 2λμρ_v`, `q_v = 2λ²ρ_v + 2λμρ_u`.
fn weights(lambda: f64, mu: f64, ru: &[f64], rv: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let qu = ru.iter().zip(rv).map(|(a, b)| 2.0 * mu * mu * a + 2.0 * lambda * mu * b).collect();
    let qv = ru.iter().zip(rv).map(|(a, b)| 2.0 * lambda * lambda * b + 2.0 * lambda * mu * a).collect();
    (qu, qv)
}

fn pair_sum(grid: &Grid, p: &[[f64; 3]], g: &[Vec<[f64; 3]>], slot: usize) -> f64 {
    let w = grid.space_weights()[0];
    p.iter()
        .zip(g)
        .map(|(a, gx)| {
            let b = gx[slot];
            w * (a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
        })
        .sum()
}

/// Interaction Morawetz potential with weight `a(x, y) = |x − y|`:
///
/// `M = 2∫∫ (x−y)/|x−y| · [p_u(x) q_u(y) + p_v(x) q_v(y)] dx dy`
///
/// where `p = Im(f̄∇f)`; this collects the four coupled double integrals.
/// Periodic grids only, using minimum-image separations.
pub fn morawetz_potential(state: &CoupledState) -> Result<f64> {
    check(state)?;
    let grid = state.grid();
    let pu = momentum(state.u(), &gradient(state.u()));
    let pv = momentum(state.v(), &gradient(state.v()));
    let (qu, qv) = densities(state);
    let table = direction_table(grid);
    let g = smear(grid, &table, &[&qu, &qv]);
    Ok(2.0 * (pair_sum(grid, &pu, &g, 0) + pair_sum(grid, &pv, &g, 1)))
}

/// Cauchy–Schwarz bound `|M| ≤ 2(‖u‖₂‖∇u‖₂‖q_u‖₁ + ‖v‖₂‖∇v‖₂‖q_v‖₁)`,
/// the natural size against which a vanishing `M` is judged.
pub fn morawetz_scale(state: &CoupledState) -> Result<f64> {
    check(state)?;
    let w = state.grid().space_weights()[0];
    let (qu, qv) = densities(state);
    let mut total = 0.0;
    for (f, q) in [(state.u(), &qu), (state.v(), &qv)] {
        let grad = sobolev_norm(f, 1.0, true)?;
        total += l2_norm_sq(f).sqrt() * grad * w * q.iter().sum::<f64>();
    }
    Ok(2.0 * total)
}

/// `dM/dt` along the flow, with `f_t` substituted from the equation.
pub fn morawetz_rate(state: &CoupledState) -> Result<f64> {
    check(state)?;
    let grid = state.grid();
    let p = state.params();
    let (u, v) = (state.u(), state.v());
    let time_derivative = |f: &Field, other: &Field, c: f64| -> Field {
        let lap = laplacian(f);
        let samples = (0..f.len())
            .map(|j| I * (lap.samples()[j] - c * other.samples()[j].norm_sqr() * f.samples()[j]))
            .collect();
        Field::new(grid.clone(), samples).expect("finite")
    };
    let ut = time_derivative(u, v, p.lambda);
    let vt = time_derivative(v, u, p.mu);
    let (gu, gv) = (gradient(u), gradient(v));
    let (gut, gvt) = (gradient(&ut), gradient(&vt));
    let momentum_rate = |f: &Field, ft: &Field, g: &[Field], gt: &[Field]| -> Vec<[f64; 3]> {
        (0..f.len())
            .map(|j| {
                let (a, at) = (f.samples()[j], ft.samples()[j]);
                [0, 1, 2].map(|k| (at.conj() * g[k].samples()[j] + a.conj() * gt[k].samples()[j]).im)
            })
            .collect()
    };
    let pu = momentum(u, &gu);
    let pv = momentum(v, &gv);
    let pu_t = momentum_rate(u, &ut, &gu, &gut);
    let pv_t = momentum_rate(v, &vt, &gv, &gvt);
    let (qu, qv) = densities(state);
    let rho_t = |f: &Field, ft: &Field| -> Vec<f64> {
        f.samples()
            .iter()
            .zip(ft.samples())
            .map(|(a, b)| 2.0 * (a.conj() * b).re)
            .collect()
    };
    let (qu_t, qv_t) = weights(p.lambda, p.mu, &rho_t(u, &ut), &rho_t(v, &vt));
    let table = direction_table(grid);
    let g = smear(grid, &table, &[&qu, &qv, &qu_t, &qv_t]);
    Ok(2.0
        * (pair_sum(grid, &pu_t, &g, 0)
            + pair_sum(grid, &pv_t, &g, 1)
            + pair_sum(grid, &pu, &g, 2)
            + pair_sum(grid, &pv, &g, 3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::strang_step;
    use crate::initial::{boosted_gaussian, gaussian, plane_wave};
    use crate::spectral::PhysParams;

    /// The four double integrals written out pair by pair.
    fn literal(state: &CoupledState) -> f64 {
        let grid = state.grid();
        let n = grid.n();
        let p = state.params();
        let (u, v) = (state.u(), state.v());
        let (gu, gv) = (gradient(u), gradient(v));
        let dx = grid.spacing();
        let w = grid.space_weights()[0];
        let at = |f: &Field, g: &[Field], j: usize| (f.samples()[j], [0, 1, 2].map(|k| g[k].samples()[j]));
        let mut total = 0.0;
        for x in 0..grid.len() {
            for y in 0..grid.len() {
                if x == y {
                    continue;
                }
                let (xi, yi) = (unravel(x, n), unravel(y, n));
                let mut d = [0.0; 3];
                for k in 0..3 {
                    let off = wrap_index((xi[k] + n - yi[k]) % n, n);
                    if off.unsigned_abs() as usize != n / 2 {
                        d[k] = off as f64 * dx;
                    }
                }
                let len = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                if len == 0.0 {
                    continue;
                }
                let ax = d.map(|c| c / len);
                let ay = ax.map(|c| -c);
                // ∇̃a · Im[ f̄(x) ḡ(y) ∇̃(f(x) g(y)) ]
                let pair = |f: &Field, gf: &[Field], g: &Field, gg: &[Field]| -> f64 {
                    let (fx, dfx) = at(f, gf, x);
                    let (gy, dgy) = at(g, gg, y);
                    let pre = fx.conj() * gy.conj();
                    let mut s = 0.0;
                    for k in 0..3 {
                        s += ax[k] * (pre * dfx[k] * gy).im + ay[k] * (pre * fx * dgy[k]).im;
                    }
                    s
                };
                total += w * w
                    * (2.0 * p.mu * p.mu * pair(u, &gu, u, &gu)
                        + 2.0 * p.lambda * p.lambda * pair(v, &gv, v, &gv)
                        + 2.0 * p.lambda * p.mu * pair(u, &gu, v, &gv)
                        + 2.0 * p.lambda * p.mu * pair(v, &gv, u, &gu));
            }
        }
        total
    }

    fn kicked(grid: &Grid, params: PhysParams) -> CoupledState {
        let u = boosted_gaussian(grid, 1.0, 1.2, [0.3, -0.2, 0.1]).unwrap();
        let v = boosted_gaussian(grid, 0.7, 1.0, [-0.1, 0.25, 0.0]).unwrap();
        CoupledState::new(u, v, params).unwrap()
    }

    #[test]
    fn matches_literal_double_integrals() {
        let grid = Grid::periodic(4.0, 8).unwrap();
        let s = kicked(&grid, PhysParams::couplings(1.3, 0.6).unwrap());
        let fast = morawetz_potential(&s).unwrap();
        let slow = literal(&s);
        assert!((fast - slow).abs() <= 1e-10 * slow.abs().max(1.0), "{fast} vs {slow}");
    }

    #[test]
    fn real_data_and_symmetric_plane_waves_give_zero() {
        let grid = Grid::periodic(6.0, 16).unwrap();
        let g = gaussian(&grid, 1.0, 1.5).unwrap();
        let s = CoupledState::new(g.clone(), g.scale(0.5.into()), PhysParams::default()).unwrap();
        assert!(morawetz_potential(&s).unwrap().abs() <= 1e-14 * morawetz_scale(&s).unwrap());
        let w = plane_wave(&grid, 0.8, [1, 2, 0]).unwrap();
        let s = CoupledState::new(w.clone(), w, PhysParams::default()).unwrap();
        assert!(morawetz_potential(&s).unwrap().abs() <= 1e-14 * morawetz_scale(&s).unwrap());
    }

    #[test]
    fn scale_bounds_the_potential() {
        let grid = Grid::periodic(4.0, 8).unwrap();
        let s = kicked(&grid, PhysParams::couplings(1.3, 0.6).unwrap());
        let m = morawetz_potential(&s).unwrap();
        assert!(m.abs() > 0.0 && m.abs() <= morawetz_scale(&s).unwrap());
    }

    #[test]
    fn guards() {
        let radial = Grid::radial(4.0, 64).unwrap();
        let z = Field::zeros(&radial);
        let s = CoupledState::new(z.clone(), z, PhysParams::default()).unwrap();
        assert!(matches!(morawetz_potential(&s), Err(Error::BackendMismatch { .. })));
        let big = Grid::periodic(4.0, 26).unwrap();
        let z = Field::zeros(&big);
        let s = CoupledState::new(z.clone(), z, PhysParams::default()).unwrap();
        assert_eq!(morawetz_potential(&s), Err(Error::CostGuard { n: 26, max: 24 }));
    }

    #[test]
    fn rate_matches_centered_difference() {
        let grid = Grid::periodic(6.0, 12).unwrap();
        let s = kicked(&grid, PhysParams::couplings(1.0, 1.5).unwrap());
        let h = 1e-4;
        let fwd = strang_step(&s, h).unwrap();
        let back = strang_step(&s, -h).unwrap();
        let fd = (morawetz_potential(&fwd).unwrap() - morawetz_potential(&back).unwrap()) / (2.0 * h);
        let exact = morawetz_rate(&s).unwrap();
        assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{fd} vs {exact}");
    }
}
