use serde::{Deserialize, Serialize};

use super::{modified_energy, modified_energy_derivative, morawetz_potential, weighted_energy, weighted_mass, MORAWETZ_MAX_N};
use crate::dynamics::{interaction_density, CoupledState};
use crate::error::Result;
use crate::spectral::{l2_norm_sq, sobolev_norm};

/// Diagnostics of one state. `morawetz_m` is filled only on periodic grids
/// within the Morawetz cost guard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass_u: f64,
    pub mass_v: f64,
    pub m_w: f64,
    pub e_w: f64,
    pub e_w_mod: f64,
    pub hs_u: f64,
    pub hs_v: f64,
    pub de_mod_dt: f64,
    pub interaction_l4: f64,
    pub morawetz_m: Option<f64>,
}

impl DiagnosticsRecord {
    /// Uses the state's own `N` and `s`.
    pub fn compute(state: &CoupledState) -> Result<Self> {
        let p = state.params();
        let (n, s) = (p.threshold, p.s);
        let grid = state.grid();
        let morawetz_m = if !grid.is_radial() && grid.n() <= MORAWETZ_MAX_N {
            Some(morawetz_potential(state)?)
        } else {
            None
        };
        Ok(DiagnosticsRecord {
            t: state.t(),
            mass_u: l2_norm_sq(state.u()),
            mass_v: l2_norm_sq(state.v()),
            m_w: weighted_mass(state),
            e_w: weighted_energy(state),
            e_w_mod: modified_energy(state, n, s)?,
            hs_u: sobolev_norm(state.u(), s, false)?,
            hs_v: sobolev_norm(state.v(), s, false)?,
            de_mod_dt: modified_energy_derivative(state, n, s)?,
            interaction_l4: interaction_density(state),
            morawetz_m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::gaussian;
    use crate::spectral::{Grid, PhysParams};

    #[test]
    fn signs_and_optional_morawetz() {
        let grid = Grid::radial(16.0, 512).unwrap();
        let g = gaussian(&grid, 1.0, 1.0).unwrap();
        let s = CoupledState::new(g.clone(), g, PhysParams::default()).unwrap();
        let r = DiagnosticsRecord::compute(&s).unwrap();
        assert!(r.mass_u > 0.0 && r.m_w > 0.0 && r.e_w > 0.0 && r.e_w_mod > 0.0 && r.interaction_l4 > 0.0);
        assert!(r.morawetz_m.is_none());
        let grid = Grid::periodic(6.0, 8).unwrap();
        let g = gaussian(&grid, 1.0, 1.0).unwrap();
        let s = CoupledState::new(g.clone(), g, PhysParams::default()).unwrap();
        let m = DiagnosticsRecord::compute(&s).unwrap().morawetz_m.unwrap();
        assert!(m.abs() <= 1e-14);
    }
}
