use serde::{Deserialize, Serialize};

use crate::diagnostics::{morawetz_potential, morawetz_rate, MORAWETZ_MAX_N};
use crate::dynamics::{evolve, CoupledState, Observer, ScalarStepper, StrangStepper};
use crate::error::{param, Error, Result};
use crate::spectral::norms::sup_norm;
use crate::spectral::{l2_norm_sq, sobolev_norm, Field, PhysParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    /// `max_t ‖u − v‖_∞`.
    pub symmetry: f64,
    /// `max_t ‖u − w‖_∞` against the scalar path `w`.
    pub scalar: f64,
}

impl ReductionReport {
    pub fn total(&self) -> f64 {
        self.symmetry + self.scalar
    }
}

/// Runs the coupled system from `u₀ = v₀ = w0` with `μ = λ` next to the scalar
/// cubic equation and records the largest deviations.
pub fn reduction_check(w0: &Field, lambda: f64, t_final: f64, dt: f64) -> Result<ReductionReport> {
    if !w0.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(param("T", format!("final time must be finite and >= 0, got {t_final}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(param("dt", format!("time step must be positive and finite, got {dt}")));
    }
    let params = PhysParams::couplings(lambda, lambda)?;
    let n_steps = (t_final / dt - 1e-9).ceil().max(1.0) as usize;
    let dt_eff = t_final / n_steps as f64;
    let mut report = ReductionReport {
        symmetry: 0.0,
        scalar: 0.0,
    };
    if t_final == 0.0 {
        return Ok(report);
    }
    let coupled = StrangStepper::new(w0.grid(), params, dt_eff)?;
    let scalar = ScalarStepper::new(w0.grid(), lambda, dt_eff)?;
    let mut s = CoupledState::new(w0.clone(), w0.clone(), params)?;
    let mut w = w0.clone();
    for _ in 0..n_steps {
        s = coupled.step(&s)?;
        w = scalar.step(&w)?;
        report.symmetry = report.symmetry.max(sup_norm(&s.u().sub(s.v())?));
        report.scalar = report.scalar.max(sup_norm(&s.u().sub(&w)?));
    }
    Ok(report)
}

/// Setup for [`morawetz_check`].
#[derive(Debug, Clone)]
pub struct MorawetzRun {
    pub state: CoupledState,
    pub t_final: f64,
    pub dt: f64,
    /// `M` and `dM/dt` are evaluated every this many steps.
    pub sample_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorawetzReport {
    /// `∫∫(|u|⁴ + |v|⁴ + |u|²|v|²) dx dt`.
    pub lhs: f64,
    /// `[sup ‖u‖₂² + sup ‖v‖₂²]·[sup ‖u‖²_{Ḣ^{1/2}} + sup ‖v‖²_{Ḣ^{1/2}}]`.
    pub rhs: f64,
    /// `lhs / rhs`, reported as 0 when both vanish.
    pub ratio: f64,
    pub m_start: f64,
    pub m_end: f64,
    /// Trapezoid integral of `dM/dt` over the samples.
    pub integrated_rate: f64,
    /// `|(M(T) − M(0)) − ∫ dM/dt| / max(|M(T) − M(0)|, |∫ dM/dt|)`, 0 when both vanish.
    pub consistency: f64,
}

#[derive(Default)]
struct MorawetzObserver {
    times: Vec<f64>,
    potential: Vec<f64>,
    rate: Vec<f64>,
    mass_u: f64,
    mass_v: f64,
    half_u: f64,
    half_v: f64,
}

impl Observer for MorawetzObserver {
    fn on_sample(&mut self, state: &CoupledState) -> Result<()> {
        self.times.push(state.t());
        self.potential.push(morawetz_potential(state)?);
        self.rate.push(morawetz_rate(state)?);
        self.mass_u = self.mass_u.max(l2_norm_sq(state.u()));
        self.mass_v = self.mass_v.max(l2_norm_sq(state.v()));
        self.half_u = self.half_u.max(sobolev_norm(state.u(), 0.5, true)?.powi(2));
        self.half_v = self.half_v.max(sobolev_norm(state.v(), 0.5, true)?.powi(2));
        Ok(())
    }
}

/// Evolves a small periodic run and compares both sides of the interaction
/// Morawetz estimate; also checks `M(T) − M(0)` against `∫ dM/dt`.
pub fn morawetz_check(run: &MorawetzRun) -> Result<MorawetzReport> {
    let grid = run.state.grid();
    if grid.is_radial() {
        return Err(Error::BackendMismatch { required: "periodic3d" });
    }
    if grid.n() > MORAWETZ_MAX_N {
        return Err(Error::CostGuard {
            n: grid.n(),
            max: MORAWETZ_MAX_N,
        });
    }
    let mut obs = MorawetzObserver::default();
    let traj = evolve(&run.state, run.t_final, run.dt, run.sample_every, &mut [&mut obs])?;
    if let Some(e) = traj.aborted() {
        return Err(e.clone());
    }
    let lhs = *traj.interaction_cumulative().last().unwrap();
    let rhs = (obs.mass_u + obs.mass_v) * (obs.half_u + obs.half_v);
    let integrated_rate: f64 = obs
        .times
        .windows(2)
        .zip(obs.rate.windows(2))
        .map(|(t, r)| 0.5 * (t[1] - t[0]) * (r[0] + r[1]))
        .sum();
    let m_start = obs.potential[0];
    let m_end = *obs.potential.last().unwrap();
    let change = m_end - m_start;
    let scale = change.abs().max(integrated_rate.abs());
    Ok(MorawetzReport {
        lhs,
        rhs,
        ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
        m_start,
        m_end,
        integrated_rate,
        consistency: if scale > 0.0 {
            (change - integrated_rate).abs() / scale
        } else {
            0.0
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::{boosted_gaussian, gaussian};
    use crate::spectral::Grid;

    #[test]
    fn reduction_is_exact_in_symmetry() {
        let grid = Grid::radial(16.0, 256).unwrap();
        let g = gaussian(&grid, 2.0, 1.0).unwrap();
        let r = reduction_check(&g, 1.0, 0.2, 1e-3).unwrap();
        assert!(r.symmetry <= 1e-12);
        assert!(r.scalar <= 1e-9);
        let lin = reduction_check(&g, 0.0, 0.2, 1e-3).unwrap();
        assert!(lin.total() <= 1e-12);
    }

    #[test]
    fn zero_data_report() {
        let grid = Grid::periodic(6.0, 8).unwrap();
        let z = Field::zeros(&grid);
        let run = MorawetzRun {
            state: CoupledState::new(z.clone(), z, PhysParams::default()).unwrap(),
            t_final: 0.05,
            dt: 1e-2,
            sample_every: 1,
        };
        let r = morawetz_check(&run).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ratio), (0.0, 0.0, 0.0));
        assert_eq!(r.consistency, 0.0);
    }

    #[test]
    fn guards() {
        let grid = Grid::radial(8.0, 64).unwrap();
        let g = gaussian(&grid, 1.0, 1.0).unwrap();
        let run = MorawetzRun {
            state: CoupledState::new(g.clone(), g, PhysParams::default()).unwrap(),
            t_final: 0.1,
            dt: 1e-2,
            sample_every: 1,
        };
        assert!(matches!(morawetz_check(&run), Err(Error::BackendMismatch { .. })));
        let grid = Grid::periodic(6.0, 32).unwrap();
        let z = Field::zeros(&grid);
        let run = MorawetzRun {
            state: CoupledState::new(z.clone(), z, PhysParams::default()).unwrap(),
            ..run
        };
        assert!(matches!(morawetz_check(&run), Err(Error::CostGuard { .. })));
    }

    #[test]
    fn small_run_is_consistent() {
        let grid = Grid::periodic(6.0, 8).unwrap();
        let u = boosted_gaussian(&grid, 1.0, 1.5, [0.2, 0.0, 0.0]).unwrap();
        let v = gaussian(&grid, 0.8, 1.5).unwrap();
        let run = MorawetzRun {
            state: CoupledState::new(u, v, PhysParams::default()).unwrap(),
            t_final: 0.1,
            dt: 1e-3,
            sample_every: 2,
        };
        let r = morawetz_check(&run).unwrap();
        assert!(r.lhs > 0.0 && r.rhs > 0.0 && r.ratio.is_finite());
        assert!(r.consistency < 1e-2, "{r:?}");
    }
}
