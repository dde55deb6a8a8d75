use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{loglog_slope, DerivativeWorkspace};
use crate::dynamics::{evolve, safe_horizon, CoupledState, Observer};
use crate::error::{param, Error, Result};
use crate::spectral::ops::check_i_params;
use crate::spectral::{GridKind, PhysParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub threshold: f64,
    /// `∫ |d/dt E_w(Iu, Iv)| dt` over the run.
    pub total: f64,
    /// `|∫ d/dt E_w(Iu, Iv) dt|`, the net change of the modified energy.
    pub net: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub grid: GridKind,
    pub params: PhysParams,
    pub s: f64,
    pub dt: f64,
    /// Requested final time.
    pub t_requested: f64,
    /// Time actually integrated: `min(T, T_safe)`.
    pub t_integrated: f64,
    pub truncated: bool,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `ln total` against `ln N`; absent when fewer
    /// than two totals are positive.
    pub slope: Option<f64>,
    pub meta: SweepMeta,
}

struct IncrementObserver<'a> {
    thresholds: &'a [f64],
    s: f64,
    dt: f64,
    prev: Option<Vec<f64>>,
    total: Vec<f64>,
    net: Vec<f64>,
    steps: usize,
}

impl Observer for IncrementObserver<'_> {
    fn on_step(&mut self, state: &CoupledState) -> Result<()> {
        let ws = DerivativeWorkspace::new(state);
        let now = self
            .thresholds
            .par_iter()
            .map(|&n| ws.derivative(n, self.s))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(prev) = &self.prev {
            for k in 0..now.len() {
                self.total[k] += 0.5 * self.dt * (prev[k].abs() + now[k].abs());
                self.net[k] += 0.5 * self.dt * (prev[k] + now[k]);
            }
            self.steps += 1;
        }
        self.prev = Some(now);
        Ok(())
    }
}

/// Integrates `|d/dt E_w(Iu, Iv)|` for every threshold in `thresholds` along a
/// single evolution of `state`.
///
/// The run stops at `min(T, T_safe)` so that boundary effects do not enter
/// the totals; [`SweepMeta::truncated`] records when that happens.
pub fn increment_sweep(state: &CoupledState, thresholds: &[f64], s: f64, t_final: f64, dt: f64) -> Result<SweepTable> {
    if thresholds.len() < 3 {
        return Err(Error::Insufficient(format!(
            "slope fit needs at least 3 values of N, got {}",
            thresholds.len()
        )));
    }
    if thresholds.windows(2).any(|w| w[1] <= w[0]) {
        return Err(param("N", "values must be strictly increasing"));
    }
    for &n in thresholds {
        check_i_params(n, s)?;
    }
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(param("T", format!("final time must be finite and >= 0, got {t_final}")));
    }
    let horizon = safe_horizon(state);
    let t_run = t_final.min(horizon);
    let n_steps = (t_run / dt - 1e-9).ceil().max(1.0);
    let mut obs = IncrementObserver {
        thresholds,
        s,
        dt: t_run / n_steps,
        prev: None,
        total: vec![0.0; thresholds.len()],
        net: vec![0.0; thresholds.len()],
        steps: 0,
    };
    let traj = evolve(state, t_run, dt, usize::MAX, &mut [&mut obs])?;
    if let Some(e) = traj.aborted() {
        return Err(e.clone());
    }
    let rows: Vec<SweepRow> = thresholds
        .iter()
        .zip(obs.total.iter().zip(&obs.net))
        .map(|(&n, (&total, &net))| SweepRow {
            threshold: n,
            total,
            net: net.abs(),
        })
        .collect();
    let totals: Vec<f64> = rows.iter().map(|r| r.total).collect();
    Ok(SweepTable {
        slope: loglog_slope(thresholds, &totals),
        rows,
        meta: SweepMeta {
            grid: state.grid().kind(),
            params: *state.params(),
            s,
            dt: traj.dt(),
            t_requested: t_final,
            t_integrated: t_run,
            truncated: t_run < t_final,
            steps: obs.steps,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::{band_limited, gaussian};
    use crate::spectral::Grid;

    fn state(amplitude: f64) -> CoupledState {
        let grid = Grid::radial(16.0, 256).unwrap();
        let g = gaussian(&grid, amplitude, 1.0).unwrap();
        CoupledState::new(g.clone(), g.scale(0.7.into()), PhysParams::default()).unwrap()
    }

    #[test]
    fn validates_threshold_list() {
        let s = state(1.0);
        assert!(increment_sweep(&s, &[4.0, 8.0], 0.75, 0.1, 1e-2).is_err());
        assert!(increment_sweep(&s, &[4.0, 4.0, 8.0], 0.75, 0.1, 1e-2).is_err());
        assert!(increment_sweep(&s, &[1.0, 2.0, 4.0], 1.0, 0.1, 1e-2).is_err());
    }

    #[test]
    fn totals_are_nonnegative_and_nonincreasing() {
        let table = increment_sweep(&state(2.0), &[1.0, 1.5, 2.0, 3.0], 0.75, 0.1, 1e-3).unwrap();
        assert_eq!(table.rows.len(), 4);
        assert_eq!(table.meta.steps, 100);
        for r in &table.rows {
            assert!(r.total >= 0.0 && r.net <= r.total + 1e-15);
        }
        for w in table.rows.windows(2) {
            assert!(w[1].total <= w[0].total);
        }
        assert!(table.slope.unwrap() < 0.0);
    }

    #[test]
    fn thresholds_above_nyquist_give_zero() {
        let s = state(2.0);
        let top = s.grid().max_frequency();
        let table = increment_sweep(&s, &[4.0 * top, 8.0 * top, 16.0 * top], 0.75, 0.05, 1e-3).unwrap();
        for r in &table.rows {
            assert!(r.total <= 1e-10, "{}", r.total);
        }
    }

    #[test]
    fn low_band_data_starts_with_zero_derivative() {
        let grid = Grid::radial(16.0, 256).unwrap();
        let f = band_limited(&grid, 1.0, 1.0, 3).unwrap();
        let s = CoupledState::new(f.clone(), f, PhysParams::default()).unwrap();
        let ws = DerivativeWorkspace::new(&s);
        for n in [4.0, 8.0, 16.0] {
            assert!(ws.derivative(n, 0.75).unwrap().abs() <= 1e-12);
        }
        let table = increment_sweep(&s, &[4.0, 8.0, 16.0], 0.75, 0.05, 1e-3).unwrap();
        for w in table.rows.windows(2) {
            assert!(w[1].total <= w[0].total);
        }
    }

    #[test]
    fn horizon_truncates_the_run() {
        let grid = Grid::radial(4.0, 128).unwrap();
        let g = gaussian(&grid, 1.0, 1.0).unwrap();
        let s = CoupledState::new(g.clone(), g, PhysParams::default()).unwrap();
        let table = increment_sweep(&s, &[2.0, 4.0, 8.0], 0.75, 1.0, 1e-2).unwrap();
        assert!(table.meta.truncated);
        assert!(table.meta.t_integrated < 1.0);
    }
}
