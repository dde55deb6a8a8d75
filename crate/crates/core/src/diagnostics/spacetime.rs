use crate::dynamics::{Component, CoupledState, Slab, Trajectory};
use crate::error::{param, Error, Result};
use crate::spectral::symbol::{chi, psi};
use crate::spectral::{apply_chain, gradient_magnitude, lebesgue_norm, Field, MultiplierSpec};

/// Minimum number of time samples for a space-time norm.
pub const MIN_TIME_SAMPLES: usize = 16;

/// Operator applied to each time slice before a space-time norm:
/// the multipliers (in any order, they commute) and optionally `|∇·|` last.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormChain {
    pub multipliers: Vec<MultiplierSpec>,
    pub gradient: bool,
}

impl NormChain {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn apply(&self, f: &Field) -> Field {
        let g = apply_chain(f, &self.multipliers);
        if self.gradient {
            gradient_magnitude(&g)
        } else {
            g
        }
    }
}

fn check_exponent(name: &'static str, p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(param(name, format!("exponent must satisfy 1 <= {name} <= inf, got {p}")))
    } else {
        Ok(())
    }
}

/// `(∫ g(t)^q dt)^{1/q}` by the trapezoid rule, or `max g` for `q = ∞`.
fn time_norm(times: &[f64], values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return values.iter().cloned().fold(0.0, f64::max);
    }
    let total: f64 = times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, g)| 0.5 * (t[1] - t[0]) * (g[0].powf(q) + g[1].powf(q)))
        .sum();
    total.powf(1.0 / q)
}

/// `‖chain(F)‖_{L^q_t L^r_x}` over a slab.
pub fn slab_norm(slab: &Slab, q: f64, r: f64, chain: &NormChain) -> Result<f64> {
    check_exponent("q", q)?;
    check_exponent("r", r)?;
    if slab.times.len() < MIN_TIME_SAMPLES {
        return Err(Error::Insufficient(format!(
            "space-time norms need at least {MIN_TIME_SAMPLES} samples, got {}",
            slab.times.len()
        )));
    }
    let values = slab
        .fields
        .iter()
        .map(|f| lebesgue_norm(&chain.apply(f), r))
        .collect::<Result<Vec<_>>>()?;
    Ok(time_norm(&slab.times, &values, q))
}

/// `‖chain(f)‖_{L^q_t L^r_x}` for one component of a trajectory.
pub fn spacetime_norm(
    traj: &Trajectory,
    component: Component,
    q: f64,
    r: f64,
    chain: &NormChain,
) -> Result<f64> {
    slab_norm(&traj.slab(component), q, r, chain)
}

/// Localized dual norm
/// `R^{1/q−1}‖ψ(R|x|)F‖_{L^q_tL²_x} + R^{1/q−1} Σ_{j≥0} 2^{j(1−1/q)}‖χ(2^{−j}R|x|)F‖_{L^q_tL²_x}`,
/// summing annuli until they leave the grid. Requires `1 ≤ q < 2`.
pub fn xr_norm(slab: &Slab, r_cutoff: f64, q: f64) -> Result<f64> {
    if !(1.0..2.0).contains(&q) {
        return Err(param("q", format!("X_R norm requires 1 <= q < 2, got {q}")));
    }
    if !(r_cutoff.is_finite() && r_cutoff > 0.0) {
        return Err(param("R", format!("cutoff must be positive and finite, got {r_cutoff}")));
    }
    if slab.fields.is_empty() {
        return Err(Error::Insufficient("empty slab".into()));
    }
    let grid = slab.fields[0].grid();
    let r_max = grid.radii().iter().cloned().fold(0.0, f64::max);
    let localized = |cut: &dyn Fn(f64) -> f64| -> f64 {
        let values: Vec<f64> = slab
            .fields
            .iter()
            .map(|f| {
                f.samples()
                    .iter()
                    .zip(grid.radii())
                    .zip(grid.space_weights())
                    .map(|((z, &r), w)| w * (cut(r) * z.norm()).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        if slab.times.len() == 1 {
            0.0
        } else {
            time_norm(&slab.times, &values, q)
        }
    };
    let pre = r_cutoff.powf(1.0 / q - 1.0);
    let mut total = localized(&|r| psi(r_cutoff * r));
    let mut j = 0;
    // χ(2^{-j}R|x|) is supported on 2^j/R ≤ |x| ≤ 2^{j+2}/R.
    while 2f64.powi(j) / r_cutoff <= r_max {
        let scale = 2f64.powi(-j) * r_cutoff;
        total += 2f64.powf(j as f64 * (1.0 - 1.0 / q)) * localized(&|r| chi(scale * r));
        j += 1;
    }
    Ok(pre * total)
}

/// Instantaneous `∫(|u|⁴ + |v|⁴ + |u|²|v|²) dx`.
pub fn interaction_integrand(state: &CoupledState) -> f64 {
    crate::dynamics::interaction_density(state)
}

/// `∫_J ∫(|u|⁴ + |v|⁴ + |u|²|v|²) dx dt` over the whole trajectory.
pub fn interaction_functional(traj: &Trajectory) -> Result<f64> {
    traj.interaction_cumulative()
        .last()
        .copied()
        .ok_or_else(|| Error::Insufficient("empty trajectory".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve;
    use crate::initial::gaussian;
    use crate::spectral::{Grid, PhysParams};

    fn run(amplitude: f64, t: f64) -> Trajectory {
        let grid = Grid::radial(16.0, 512).unwrap();
        let g = gaussian(&grid, amplitude, 1.0).unwrap();
        let s = CoupledState::new(g.clone(), g.scale(0.5.into()), PhysParams::default()).unwrap();
        evolve(&s, t, 1e-3, 10, &mut []).unwrap()
    }

    #[test]
    fn sup_in_time_of_mass_is_initial_norm() {
        let traj = run(1.0, 0.2);
        let n = spacetime_norm(&traj, Component::U, f64::INFINITY, 2.0, &NormChain::identity()).unwrap();
        let n0 = lebesgue_norm(traj.first().u(), 2.0).unwrap();
        assert!((n - n0).abs() <= 1e-9 * n0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let traj = run(1.0, 0.2);
        let chain = NormChain::identity();
        assert!(spacetime_norm(&traj, Component::U, 0.5, 2.0, &chain).is_err());
        let short = run(1.0, 0.05);
        assert!(matches!(
            spacetime_norm(&short, Component::U, 2.0, 2.0, &chain),
            Err(Error::Insufficient(_))
        ));
        assert!(xr_norm(&traj.slab(Component::U), 1.0, 2.0).is_err());
    }

    #[test]
    fn chain_order_is_irrelevant() {
        let traj = run(1.0, 0.2);
        let a = NormChain {
            multipliers: vec![
                MultiplierSpec::HighPass { cutoff: 0.5 },
                MultiplierSpec::IOperator { threshold: 1.0, s: 0.75 },
            ],
            gradient: true,
        };
        let mut b = a.clone();
        b.multipliers.reverse();
        let na = spacetime_norm(&traj, Component::U, 2.0, 6.0, &a).unwrap();
        let nb = spacetime_norm(&traj, Component::U, 2.0, 6.0, &b).unwrap();
        assert!((na - nb).abs() <= 1e-12 * na);
    }

    #[test]
    fn xr_norm_properties() {
        let grid = Grid::radial(16.0, 512).unwrap();
        let times: Vec<f64> = (0..4).map(|k| k as f64 * 0.1).collect();
        let zero = Slab {
            times: times.clone(),
            fields: vec![Field::zeros(&grid); 4],
        };
        assert_eq!(xr_norm(&zero, 1.0, 1.5).unwrap(), 0.0);
        let g = gaussian(&grid, 1.0, 0.3).unwrap();
        let one = Slab {
            times: times.clone(),
            fields: vec![g.clone(); 4],
        };
        let two = Slab {
            times: times.clone(),
            fields: vec![g.scale(2.0.into()); 4],
        };
        let a = xr_norm(&one, 1.0, 1.5).unwrap();
        let b = xr_norm(&two, 1.0, 1.5).unwrap();
        assert!((b - 2.0 * a).abs() <= 1e-12 * b);
        // Compact support inside |x| ≤ 1/R: only the ψ block contributes.
        let bump = Field::from_radial_fn(&grid, |r| if r < 0.9 { (1.0 - r).into() } else { 0.0.into() }).unwrap();
        let slab = Slab {
            times,
            fields: vec![bump.clone(); 4],
        };
        let only_psi = (bump.samples().iter().zip(grid.space_weights()).map(|(z, w)| w * z.norm_sqr()).sum::<f64>()).sqrt()
            * 0.3f64.powf(1.0 / 1.5);
        assert!((xr_norm(&slab, 1.0, 1.5).unwrap() - only_psi).abs() <= 1e-12);
    }

    #[test]
    fn interaction_functional_is_monotone_in_time() {
        let short = interaction_functional(&run(1.0, 0.1)).unwrap();
        let long = interaction_functional(&run(1.0, 0.2)).unwrap();
        assert!(long > short && short > 0.0);
        assert_eq!(interaction_functional(&run(0.0, 0.1)).unwrap(), 0.0);
        assert_eq!(interaction_functional(&run(1.0, 0.0)).unwrap(), 0.0);
    }
}
