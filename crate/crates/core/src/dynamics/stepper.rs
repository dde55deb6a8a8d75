use std::f64::consts::PI;

use num_complex::Complex64;

use super::CoupledState;
use crate::error::{param, Error, Result};
use crate::spectral::{inverse_transform, l2_norm_sq, transform, Field, Grid, PhysParams};

/// Largest relative change of `‖u‖² + ‖v‖²` tolerated in one step.
pub const MASS_JUMP_LIMIT: f64 = 1e-3;

fn phase_table(grid: &Grid, t: f64) -> Vec<Complex64> {
    grid.freq_magnitudes()
        .iter()
        .map(|&xi| Complex64::from_polar(1.0, -4.0 * PI * PI * t * xi * xi))
        .collect()
}

fn kinetic(field: &Field, table: &[Complex64]) -> Field {
    inverse_transform(&transform(field).multiply_table(table))
}

fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt != 0.0 {
        Ok(())
    } else {
        Err(param("dt", format!("time step must be finite and nonzero, got {dt}")))
    }
}

/// Strang splitting with cached kinetic phase tables.
///
/// Negative `dt` steps backwards; the scheme is symmetric, so a `+dt` step
/// followed by a `-dt` step returns the state up to roundoff.
#[derive(Debug, Clone)]
pub struct StrangStepper {
    grid: Grid,
    params: PhysParams,
    dt: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
}

impl StrangStepper {
    pub fn new(grid: &Grid, params: PhysParams, dt: f64) -> Result<Self> {
        check_dt(dt)?;
        params.validate()?;
        Ok(StrangStepper {
            grid: grid.clone(),
            params,
            dt,
            half: phase_table(grid, 0.5 * dt),
            full: phase_table(grid, dt),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, state: &CoupledState) -> Result<CoupledState> {
        if state.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let t_next = state.t + self.dt;
        let (u, v) = if self.params.is_linear() {
            rayon::join(|| kinetic(&state.u, &self.full), || kinetic(&state.v, &self.full))
        } else {
            let (u, v) = rayon::join(|| kinetic(&state.u, &self.half), || kinetic(&state.v, &self.half));
            let (u, v) = potential(&u, &v, self.params.lambda, self.params.mu, self.dt);
            rayon::join(|| kinetic(&u, &self.half), || kinetic(&v, &self.half))
        };
        if !(u.is_finite() && v.is_finite()) {
            return Err(Error::BlowUp {
                t: t_next,
                reason: "non-finite sample".into(),
            });
        }
        let before = l2_norm_sq(&state.u) + l2_norm_sq(&state.v);
        let after = l2_norm_sq(&u) + l2_norm_sq(&v);
        let jump = if before > 0.0 {
            (after - before).abs() / before
        } else {
            after
        };
        if jump > MASS_JUMP_LIMIT {
            return Err(Error::BlowUp {
                t: t_next,
                reason: format!("relative mass jump {jump:.3e} in one step"),
            });
        }
        Ok(CoupledState {
            t: t_next,
            u,
            v,
            params: self.params,
        })
    }
}

/// Exact flow of `iu_t = λ|v|²u, iv_t = μ|u|²v`; both moduli are invariant,
/// so the phases use the entry values.
fn potential(u: &Field, v: &Field, lambda: f64, mu: f64, dt: f64) -> (Field, Field) {
    let (us, vs) = (u.samples(), v.samples());
    let mut nu = Vec::with_capacity(us.len());
    let mut nv = Vec::with_capacity(vs.len());
    for (&a, &b) in us.iter().zip(vs) {
        nu.push(a * Complex64::from_polar(1.0, -lambda * b.norm_sqr() * dt));
        nv.push(b * Complex64::from_polar(1.0, -mu * a.norm_sqr() * dt));
    }
    (
        Field::from_raw(u.grid().clone(), nu),
        Field::from_raw(v.grid().clone(), nv),
    )
}

/// One Strang step of size `dt`.
pub fn strang_step(state: &CoupledState, dt: f64) -> Result<CoupledState> {
    StrangStepper::new(state.grid(), state.params, dt)?.step(state)
}

/// Strang splitting for the scalar equation `iw_t + Δw = λ|w|²w`.
#[derive(Debug, Clone)]
pub struct ScalarStepper {
    lambda: f64,
    dt: f64,
    half: Vec<Complex64>,
}

impl ScalarStepper {
    pub fn new(grid: &Grid, lambda: f64, dt: f64) -> Result<Self> {
        check_dt(dt)?;
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(param("lambda", format!("coupling must be finite and >= 0, got {lambda}")));
        }
        Ok(ScalarStepper {
            lambda,
            dt,
            half: phase_table(grid, 0.5 * dt),
        })
    }

    pub fn step(&self, w: &Field) -> Result<Field> {
        let a = kinetic(w, &self.half);
        let b = a.map(|z| z * Complex64::from_polar(1.0, -self.lambda * z.norm_sqr() * self.dt));
        let c = kinetic(&b, &self.half);
        if !c.is_finite() {
            return Err(Error::BlowUp {
                t: f64::NAN,
                reason: "non-finite sample in scalar path".into(),
            });
        }
        Ok(c)
    }
}
