use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::CoupledState;
use crate::error::Result;
use crate::spectral::ops::{check_i_params, high_pass, low_pass};
use crate::spectral::symbol::i_symbol;
use crate::spectral::{inverse_transform, transform, Field, Grid, PhysParams, SpectralField};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `|Iv|²(Iu) − I(|v|²u)`
    U,
    /// `|Iu|²(Iv) − I(|u|²v)`
    V,
}

fn i_table(grid: &Grid, threshold: f64, s: f64) -> Vec<f64> {
    grid.freq_magnitudes()
        .iter()
        .map(|&xi| i_symbol(xi, threshold, s))
        .collect()
}

fn apply_table(f: &Field, table: &[f64]) -> Field {
    inverse_transform(&transform(f).multiply_real_table(table))
}

fn pointwise(a: &Field, f: impl Fn(usize) -> Complex64) -> Field {
    Field::new(a.grid().clone(), (0..a.len()).map(f).collect()).expect("finite inputs")
}

/// `|Ib|²(Ia) − I(|b|²a)` for a multiplier table `m`.
fn commutator_with(a: &Field, b: &Field, m: &[f64]) -> Field {
    let (ia, ib) = (apply_table(a, m), apply_table(b, m));
    let prod = pointwise(a, |j| b.samples()[j].norm_sqr() * a.samples()[j]);
    let i_prod = apply_table(&prod, m);
    pointwise(a, |j| {
        ib.samples()[j].norm_sqr() * ia.samples()[j] - i_prod.samples()[j]
    })
}

fn sides(state: &CoupledState, side: Side) -> (&Field, &Field) {
    match side {
        Side::U => (state.u(), state.v()),
        Side::V => (state.v(), state.u()),
    }
}

/// Commutator field for one side of the system.
pub fn commutator_field(state: &CoupledState, threshold: f64, s: f64, side: Side) -> Result<Field> {
    check_i_params(threshold, s)?;
    let (a, b) = sides(state, side);
    Ok(commutator_with(a, b, &i_table(state.grid(), threshold, s)))
}

/// Frequency decomposition of a commutator with `lo = P_{≤N/8}` and
/// `hi = P_{>N/8}`, writing `|b|² = |b_lo|² + |b_hi|² + 2Re(b_hi b̄_lo)`:
///
/// 1. `|b_lo|²` against `a_hi`
/// 2. `|b_hi|²` against `a_lo`
/// 3. `|b_hi|²` against `a_hi`
/// 4. `2Re(b_hi b̄_lo)` against `a_hi`
/// 5. `2Re(b_hi b̄_lo)` against `a_lo`
///
/// Each term is `X(Ib)·(Ia) − I(X(b)·a)`. The remaining `|b_lo|²` against
/// `a_lo` piece is kept in `low_low`; its output frequencies stay below
/// `3N/4`, where `I` is the identity, so it vanishes up to discretization
/// error.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorTerms {
    pub terms: [Field; 5],
    pub low_low: Field,
}

impl CommutatorTerms {
    /// Sum of the five named terms.
    pub fn five_term_sum(&self) -> Field {
        let mut acc = self.terms[0].clone();
        for t in &self.terms[1..] {
            acc = acc.add(t).expect("same grid");
        }
        acc
    }

    /// Five terms plus the low-low remainder.
    pub fn total(&self) -> Field {
        self.five_term_sum().add(&self.low_low).expect("same grid")
    }
}

pub fn commutator_decomposition(
    state: &CoupledState,
    threshold: f64,
    s: f64,
    side: Side,
) -> Result<CommutatorTerms> {
    check_i_params(threshold, s)?;
    let (a, b) = sides(state, side);
    let m = i_table(state.grid(), threshold, s);
    let cut = threshold / 8.0;
    let (a_lo, a_hi) = (low_pass(a, cut), high_pass(a, cut));
    let (b_lo, b_hi) = (low_pass(b, cut), high_pass(b, cut));
    let (ia_lo, ia_hi) = (apply_table(&a_lo, &m), apply_table(&a_hi, &m));
    let (ib_lo, ib_hi) = (apply_table(&b_lo, &m), apply_table(&b_hi, &m));

    let sq = |f: &Field| -> Vec<f64> { f.samples().iter().map(|z| z.norm_sqr()).collect() };
    let cross = |hi: &Field, lo: &Field| -> Vec<f64> {
        hi.samples()
            .iter()
            .zip(lo.samples())
            .map(|(h, l)| 2.0 * (h * l.conj()).re)
            .collect()
    };
    let (x_lo, x_hi, x_cross) = (sq(&b_lo), sq(&b_hi), cross(&b_hi, &b_lo));
    let (ix_lo, ix_hi, ix_cross) = (sq(&ib_lo), sq(&ib_hi), cross(&ib_hi, &ib_lo));

    let term = |ix: &[f64], ia: &Field, x: &[f64], af: &Field| -> Field {
        let prod = pointwise(af, |j| x[j] * af.samples()[j]);
        let i_prod = apply_table(&prod, &m);
        pointwise(af, |j| ix[j] * ia.samples()[j] - i_prod.samples()[j])
    };
    Ok(CommutatorTerms {
        terms: [
            term(&ix_lo, &ia_hi, &x_lo, &a_hi),
            term(&ix_hi, &ia_lo, &x_hi, &a_lo),
            term(&ix_hi, &ia_hi, &x_hi, &a_hi),
            term(&ix_cross, &ia_hi, &x_cross, &a_hi),
            term(&ix_cross, &ia_lo, &x_cross, &a_lo),
        ],
        low_low: term(&ix_lo, &ia_lo, &x_lo, &a_lo),
    })
}

/// Spectra shared by every threshold when evaluating `d/dt E_w(Iu, Iv)`.
#[derive(Debug, Clone)]
pub struct DerivativeWorkspace {
    grid: Grid,
    params: PhysParams,
    u_hat: SpectralField,
    v_hat: SpectralField,
    nu_hat: SpectralField,
    nv_hat: SpectralField,
}

impl DerivativeWorkspace {
    pub fn new(state: &CoupledState) -> Self {
        let (u, v) = (state.u(), state.v());
        let nu = pointwise(u, |j| v.samples()[j].norm_sqr() * u.samples()[j]);
        let nv = pointwise(v, |j| u.samples()[j].norm_sqr() * v.samples()[j]);
        DerivativeWorkspace {
            grid: state.grid().clone(),
            params: *state.params(),
            u_hat: transform(u),
            v_hat: transform(v),
            nu_hat: transform(&nu),
            nv_hat: transform(&nv),
        }
    }

    /// `λμ Re∫[conj(∂_t Iu)·C_u + conj(∂_t Iv)·C_v] dx` with
    /// `∂_t Iu = i(ΔIu − λ I(|v|²u))` substituted from the equation.
    pub fn derivative(&self, threshold: f64, s: f64) -> Result<f64> {
        check_i_params(threshold, s)?;
        let PhysParams { lambda, mu, .. } = self.params;
        if lambda * mu == 0.0 {
            return Ok(0.0);
        }
        let m = i_table(&self.grid, threshold, s);
        let lap: Vec<f64> = self
            .grid
            .freq_magnitudes()
            .iter()
            .map(|&xi| -4.0 * PI * PI * xi * xi)
            .collect();
        let side = |f_hat: &SpectralField, g_hat: &SpectralField, n_hat: &SpectralField, c: f64| {
            let i_f = inverse_transform(&f_hat.multiply_real_table(&m));
            let i_g = inverse_transform(&g_hat.multiply_real_table(&m));
            let i_n = inverse_transform(&n_hat.multiply_real_table(&m));
            let coeffs: Vec<Complex64> = f_hat
                .coeffs()
                .iter()
                .zip(n_hat.coeffs())
                .zip(m.iter().zip(&lap))
                .map(|((&fc, &nc), (&mk, &lk))| I * mk * (lk * fc - c * nc))
                .collect();
            let i_ft = inverse_transform(&SpectralField::new(self.grid.clone(), coeffs).expect("finite"));
            let (f, g, n, ft) = (i_f.samples(), i_g.samples(), i_n.samples(), i_ft.samples());
            self.grid
                .space_weights()
                .iter()
                .enumerate()
                .map(|(j, w)| {
                    let comm = g[j].norm_sqr() * f[j] - n[j];
                    w * (ft[j].conj() * comm).re
                })
                .sum::<f64>()
        };
        let (du, dv) = rayon::join(
            || side(&self.u_hat, &self.v_hat, &self.nu_hat, lambda),
            || side(&self.v_hat, &self.u_hat, &self.nv_hat, mu),
        );
        Ok(lambda * mu * (du + dv))
    }
}

/// Time derivative of `E_w(Iu, Iv)` along the flow, from the commutator
/// identity (no numerical differentiation).
pub fn modified_energy_derivative(state: &CoupledState, threshold: f64, s: f64) -> Result<f64> {
    DerivativeWorkspace::new(state).derivative(threshold, s)
}
