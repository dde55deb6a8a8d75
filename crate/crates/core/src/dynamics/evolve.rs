use super::{safe_horizon, CoupledState, StrangStepper};
use crate::error::{param, Error, Result};
use crate::spectral::norms::integrate_density;
use crate::spectral::Field;

/// Callbacks invoked during [`evolve`]. Both see immutable states.
pub trait Observer {
    /// Called at every sample instant (including the initial and final state).
    fn on_sample(&mut self, _state: &CoupledState) -> Result<()> {
        Ok(())
    }

    /// Called after every step and once for the initial state.
    fn on_step(&mut self, _state: &CoupledState) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    U,
    V,
}

/// Time-indexed family of fields on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Slab {
    pub times: Vec<f64>,
    pub fields: Vec<Field>,
}

/// Sampled states plus running space-time integrals.
///
/// `interaction_cumulative()[k]` is `∫_0^{t_k} ∫ (|u|⁴+|v|⁴+|u|²|v|²) dx dt` and
/// `l5_cumulative()[k]` is `∫_0^{t_k} ∫ (|u|⁵+|v|⁵) dx dt`, both accumulated by
/// the trapezoid rule over every time step (not only the samples).
#[derive(Debug, Clone)]
pub struct Trajectory {
    states: Vec<CoupledState>,
    interaction_cum: Vec<f64>,
    l5_cum: Vec<f64>,
    dt: f64,
    t_safe: f64,
    aborted: Option<Error>,
}

pub(crate) fn interaction_density(state: &CoupledState) -> f64 {
    let (u, v) = (state.u.samples(), state.v.samples());
    u.iter()
        .zip(v)
        .zip(state.grid().space_weights())
        .map(|((a, b), w)| {
            let (a2, b2) = (a.norm_sqr(), b.norm_sqr());
            w * (a2 * a2 + b2 * b2 + a2 * b2)
        })
        .sum()
}

pub(crate) fn l5_density(state: &CoupledState) -> f64 {
    integrate_density(&state.u, |a| a.powi(5)) + integrate_density(&state.v, |a| a.powi(5))
}

impl Trajectory {
    /// Builds a trajectory from externally produced samples; the integrals
    /// use the trapezoid rule over the given sample times only.
    pub fn from_states(states: Vec<CoupledState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Insufficient("trajectory needs at least one state".into()));
        }
        for w in states.windows(2) {
            if w[1].t.is_nan() || w[1].t <= w[0].t {
                return Err(param("t", "sample times must be strictly increasing"));
            }
            if w[0].grid() != w[1].grid() {
                return Err(Error::GridMismatch);
            }
        }
        let mut interaction_cum = vec![0.0];
        let mut l5_cum = vec![0.0];
        for w in states.windows(2) {
            let h = w[1].t - w[0].t;
            let i = 0.5 * h * (interaction_density(&w[0]) + interaction_density(&w[1]));
            let l = 0.5 * h * (l5_density(&w[0]) + l5_density(&w[1]));
            interaction_cum.push(interaction_cum.last().unwrap() + i);
            l5_cum.push(l5_cum.last().unwrap() + l);
        }
        let dt = if states.len() > 1 {
            states[1].t - states[0].t
        } else {
            0.0
        };
        let t_safe = states[0].t + safe_horizon(&states[0]);
        Ok(Trajectory {
            states,
            interaction_cum,
            l5_cum,
            dt,
            t_safe,
            aborted: None,
        })
    }

    pub fn states(&self) -> &[CoupledState] {
        &self.states
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> &CoupledState {
        &self.states[0]
    }

    pub fn last(&self) -> &CoupledState {
        self.states.last().expect("trajectories are never empty")
    }

    pub fn interaction_cumulative(&self) -> &[f64] {
        &self.interaction_cum
    }

    pub fn l5_cumulative(&self) -> &[f64] {
        &self.l5_cum
    }

    /// Effective step size used by the integrator.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Absolute time up to which domain truncation is negligible.
    pub fn t_safe(&self) -> f64 {
        self.t_safe
    }

    /// Blow-up signal that stopped the run early, if any.
    pub fn aborted(&self) -> Option<&Error> {
        self.aborted.as_ref()
    }

    /// Index of the sample at time `t` (relative tolerance 1e-9).
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.states
            .iter()
            .position(|s| (s.t - t).abs() <= tol)
            .ok_or(Error::UnsampledTime(t))
    }

    pub fn slab(&self, component: Component) -> Slab {
        Slab {
            times: self.times(),
            fields: self
                .states
                .iter()
                .map(|s| match component {
                    Component::U => s.u.clone(),
                    Component::V => s.v.clone(),
                })
                .collect(),
        }
    }
}

/// Runs Strang steps from `state` up to `state.t + t_final`.
///
/// The step is shrunk to `dt_eff = t_final / ceil(t_final / dt)` so the run
/// ends exactly at the requested time. States are sampled every
/// `sample_every` steps and at the final step. A blow-up stops the run and
/// is recorded in [`Trajectory::aborted`]; the samples taken so far are kept.
pub fn evolve(
    state: &CoupledState,
    t_final: f64,
    dt: f64,
    sample_every: usize,
    observers: &mut [&mut dyn Observer],
) -> Result<Trajectory> {
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(param("T", format!("final time must be finite and >= 0, got {t_final}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(param("dt", format!("time step must be positive and finite, got {dt}")));
    }
    if sample_every == 0 {
        return Err(param("save_every", "sampling interval must be at least 1"));
    }
    if !state.is_finite() {
        return Err(Error::BlowUp {
            t: state.t,
            reason: "non-finite initial state".into(),
        });
    }
    let n_steps = if t_final == 0.0 {
        0
    } else {
        (t_final / dt - 1e-9).ceil().max(1.0) as usize
    };
    let dt_eff = if n_steps == 0 { dt } else { t_final / n_steps as f64 };
    let t0 = state.t;
    let mut traj = Trajectory {
        states: vec![state.clone()],
        interaction_cum: vec![0.0],
        l5_cum: vec![0.0],
        dt: dt_eff,
        t_safe: t0 + safe_horizon(state),
        aborted: None,
    };
    for obs in observers.iter_mut() {
        obs.on_step(state)?;
        obs.on_sample(state)?;
    }
    if n_steps == 0 {
        return Ok(traj);
    }
    let stepper = StrangStepper::new(state.grid(), state.params, dt_eff)?;
    let mut current = state.clone();
    let (mut dens_i, mut dens_l) = (interaction_density(state), l5_density(state));
    let (mut cum_i, mut cum_l) = (0.0, 0.0);
    for k in 1..=n_steps {
        let mut next = match stepper.step(&current) {
            Ok(s) => s,
            Err(e @ Error::BlowUp { .. }) => {
                traj.aborted = Some(e);
                return Ok(traj);
            }
            Err(e) => return Err(e),
        };
        // Sample times are computed, not accumulated, so they can be looked up exactly.
        next.t = t0 + k as f64 * dt_eff;
        let (ni, nl) = (interaction_density(&next), l5_density(&next));
        cum_i += 0.5 * dt_eff * (dens_i + ni);
        cum_l += 0.5 * dt_eff * (dens_l + nl);
        (dens_i, dens_l) = (ni, nl);
        for obs in observers.iter_mut() {
            obs.on_step(&next)?;
        }
        if k % sample_every == 0 || k == n_steps {
            for obs in observers.iter_mut() {
                obs.on_sample(&next)?;
            }
            traj.states.push(next.clone());
            traj.interaction_cum.push(cum_i);
            traj.l5_cum.push(cum_l);
        }
        current = next;
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::gaussian;
    use crate::spectral::{l2_norm_sq, Grid, PhysParams};

    fn state(amplitude: f64) -> CoupledState {
        let grid = Grid::radial(16.0, 256).unwrap();
        let g = gaussian(&grid, amplitude, 1.0).unwrap();
        CoupledState::new(g.clone(), g.scale(0.5.into()), PhysParams::default()).unwrap()
    }

    struct Counter {
        samples: usize,
        steps: usize,
    }

    impl Observer for Counter {
        fn on_sample(&mut self, _: &CoupledState) -> Result<()> {
            self.samples += 1;
            Ok(())
        }
        fn on_step(&mut self, _: &CoupledState) -> Result<()> {
            self.steps += 1;
            Ok(())
        }
    }

    #[test]
    fn zero_time_gives_single_state() {
        let traj = evolve(&state(1.0), 0.0, 1e-3, 1, &mut []).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.interaction_cumulative(), &[0.0]);
    }

    #[test]
    fn sampling_and_observers() {
        let mut c = Counter { samples: 0, steps: 0 };
        let traj = evolve(&state(1.0), 0.1, 0.01, 3, &mut [&mut c]).unwrap();
        // steps 0,3,6,9 and the final step 10
        assert_eq!(traj.len(), 5);
        assert_eq!(c.samples, 5);
        assert_eq!(c.steps, 11);
        assert!((traj.last().t() - 0.1).abs() < 1e-15);
        assert!(traj.index_of(0.06).is_ok());
        assert_eq!(traj.index_of(0.05), Err(Error::UnsampledTime(0.05)));
    }

    #[test]
    fn step_is_shrunk_to_hit_final_time() {
        let traj = evolve(&state(1.0), 0.1, 0.03, 1, &mut []).unwrap();
        assert_eq!(traj.len(), 5);
        assert!((traj.dt() - 0.025).abs() < 1e-15);
    }

    #[test]
    fn integrals_are_nondecreasing_and_mass_is_kept() {
        let traj = evolve(&state(2.0), 0.2, 1e-3, 10, &mut []).unwrap();
        for w in traj.interaction_cumulative().windows(2) {
            assert!(w[1] >= w[0]);
        }
        for w in traj.l5_cumulative().windows(2) {
            assert!(w[1] >= w[0]);
        }
        let m0 = l2_norm_sq(traj.first().u());
        let m1 = l2_norm_sq(traj.last().u());
        assert!(((m1 - m0) / m0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_state_is_rejected() {
        let grid = Grid::radial(16.0, 64).unwrap();
        let g = Field::zeros(&grid);
        let mut s = CoupledState::new(g.clone(), g, PhysParams::default()).unwrap();
        let mut samples = s.u.samples().to_vec();
        samples[3] = num_complex::Complex64::new(f64::NAN, 0.0);
        s.u = Field::from_raw(grid.clone(), samples);
        assert!(matches!(evolve(&s, 1.0, 0.1, 1, &mut []), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn blow_up_keeps_partial_trajectory() {
        // |v|² overflows, so the potential phase turns non-finite.
        let grid = Grid::radial(16.0, 64).unwrap();
        let g = gaussian(&grid, 1e200, 1.0).unwrap();
        let s = CoupledState::new(g.clone(), g, PhysParams::default()).unwrap();
        let traj = evolve(&s, 0.1, 0.01, 1, &mut []).unwrap();
        assert!(matches!(traj.aborted(), Some(Error::BlowUp { .. })));
        assert_eq!(traj.len(), 1);
    }
}
