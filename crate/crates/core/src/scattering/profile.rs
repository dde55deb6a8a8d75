use serde::{Deserialize, Serialize};

use crate::dynamics::{free_propagate, CoupledState, Trajectory};
use crate::error::{param, Error, Result};
use crate::spectral::{sobolev_norm, Field};

/// Relative growth of the L⁵ accumulation over the last quarter of a run
/// below which it counts as saturated.
pub const L5_SATURATION: f64 = 0.05;

/// `(e^{−itΔ}u(t), e^{−itΔ}v(t))`.
pub fn inverse_profile(state: &CoupledState) -> (Field, Field) {
    let t = state.t();
    (free_propagate(state.u(), -t), free_propagate(state.v(), -t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converging,
    Inconclusive,
    Diverging,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringReport {
    pub checkpoints: Vec<f64>,
    /// `‖w(t_{k+1}) − w(t_k)‖_{H^s}` for `u`.
    pub increments_u: Vec<f64>,
    pub increments_v: Vec<f64>,
    /// Sum of both components, used for the verdict.
    pub increments: Vec<f64>,
    pub tolerance: f64,
    pub l5_total: f64,
    pub l5_last_quarter_growth: f64,
    pub l5_saturated: bool,
    pub beyond_safe_horizon: bool,
    pub verdict: Verdict,
    /// Last profiles, the asymptotic-state estimates.
    #[serde(skip)]
    pub u_plus: Option<Field>,
    #[serde(skip)]
    pub v_plus: Option<Field>,
}

/// Relative growth of the L⁵ accumulation between `3T/4` and `T`.
pub fn l5_growth_last_quarter(traj: &Trajectory) -> f64 {
    let cum = traj.l5_cumulative();
    let total = *cum.last().unwrap();
    if total <= 0.0 {
        return 0.0;
    }
    let times = traj.times();
    let (t0, t1) = (times[0], *times.last().unwrap());
    let mark = t0 + 0.75 * (t1 - t0);
    // Linear interpolation of the cumulative integral at the mark.
    let k = times.iter().position(|&t| t >= mark).unwrap_or(times.len() - 1);
    let at_mark = if k == 0 {
        cum[0]
    } else {
        let (ta, tb) = (times[k - 1], times[k]);
        let f = (mark - ta) / (tb - ta);
        cum[k - 1] + f * (cum[k] - cum[k - 1])
    };
    (total - at_mark) / total
}

/// Cauchy test of the back-propagated profiles at the given sampled times.
///
/// Converging requires every consecutive increment to decrease strictly
/// (increments at roundoff level, below `1e-12·max(1, ‖w‖_{H^s})`, count as
/// equal zeros) and the last increment below `tol`. Monotonically
/// nondecreasing increments above `tol` are diverging. Any checkpoint past
/// the safe horizon makes the verdict inconclusive.
pub fn scattering_report(traj: &Trajectory, s: f64, tol: f64, checkpoints: &[f64]) -> Result<ScatteringReport> {
    if checkpoints.len() < 3 {
        return Err(Error::Insufficient(format!(
            "need at least 3 checkpoints, got {}",
            checkpoints.len()
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(param("tol", format!("tolerance must be positive, got {tol}")));
    }
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(param("checkpoints", "checkpoints must be strictly increasing"));
    }
    let mut profiles = Vec::with_capacity(checkpoints.len());
    for &t in checkpoints {
        let idx = traj.index_of(t)?;
        profiles.push(inverse_profile(&traj.states()[idx]));
    }
    let mut increments_u = Vec::new();
    let mut increments_v = Vec::new();
    let mut scale: f64 = 1.0;
    for (w, z) in &profiles {
        scale = scale.max(sobolev_norm(w, s, false)?).max(sobolev_norm(z, s, false)?);
    }
    for pair in profiles.windows(2) {
        increments_u.push(sobolev_norm(&pair[1].0.sub(&pair[0].0)?, s, false)?);
        increments_v.push(sobolev_norm(&pair[1].1.sub(&pair[0].1)?, s, false)?);
    }
    let increments: Vec<f64> = increments_u.iter().zip(&increments_v).map(|(a, b)| a + b).collect();
    let floor = 1e-12 * scale;
    let decreasing = increments
        .windows(2)
        .all(|w| w[1] < w[0] || (w[0] <= floor && w[1] <= floor));
    let last = *increments.last().unwrap();
    let beyond = checkpoints.iter().any(|&t| t > traj.t_safe());
    let verdict = if beyond {
        Verdict::Inconclusive
    } else if decreasing && last < tol {
        Verdict::Converging
    } else if last >= tol && increments.windows(2).all(|w| w[1] >= w[0]) {
        Verdict::Diverging
    } else {
        Verdict::Inconclusive
    };
    let growth = l5_growth_last_quarter(traj);
    let (u_plus, v_plus) = profiles.pop().unwrap();
    Ok(ScatteringReport {
        checkpoints: checkpoints.to_vec(),
        increments_u,
        increments_v,
        increments,
        tolerance: tol,
        l5_total: *traj.l5_cumulative().last().unwrap(),
        l5_last_quarter_growth: growth,
        l5_saturated: growth < L5_SATURATION,
        beyond_safe_horizon: beyond,
        verdict,
        u_plus: Some(u_plus),
        v_plus: Some(v_plus),
    })
}
