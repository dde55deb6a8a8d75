use num_complex::Complex64;

use super::Trajectory;
use crate::error::{param, Result};
use crate::spectral::{transform, Field, MultiplierSpec, SpectralField};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `‖u(t1) − e^{i(t1−t0)Δ}u(t0) + i∫_{t0}^{t1} e^{i(t1−s)Δ}(λ|v|²u)(s) ds‖₂`
/// plus the matching `v` residual, with the time integral taken by the
/// trapezoid rule over the saved samples.
pub fn duhamel_residual(traj: &Trajectory, t0: f64, t1: f64) -> Result<f64> {
    let i0 = traj.index_of(t0)?;
    let i1 = traj.index_of(t1)?;
    if i0 >= i1 {
        return Err(param("t0", format!("need t0 < t1, got t0={t0}, t1={t1}")));
    }
    let states = &traj.states()[i0..=i1];
    let params = *states[0].params();
    let end = states.last().unwrap().t();
    let grid = states[0].grid().clone();
    let mut acc_u = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut acc_v = acc_u.clone();
    for (k, s) in states.iter().enumerate() {
        let left = if k > 0 { s.t() - states[k - 1].t() } else { 0.0 };
        let right = if k + 1 < states.len() { states[k + 1].t() - s.t() } else { 0.0 };
        let weight = 0.5 * (left + right);
        let phase = MultiplierSpec::SchrodingerPhase { t: end - s.t() };
        let (u, v) = (s.u().samples(), s.v().samples());
        let nu: Vec<Complex64> = u.iter().zip(v).map(|(a, b)| params.lambda * b.norm_sqr() * a).collect();
        let nv: Vec<Complex64> = u.iter().zip(v).map(|(a, b)| params.mu * a.norm_sqr() * b).collect();
        for (acc, n) in [(&mut acc_u, nu), (&mut acc_v, nv)] {
            let spec = transform(&Field::new(grid.clone(), n)?).multiply(|xi| phase.eval(xi));
            for (a, c) in acc.iter_mut().zip(spec.coeffs()) {
                *a += weight * c;
            }
        }
    }
    let first = &states[0];
    let last = states.last().unwrap();
    let free = MultiplierSpec::SchrodingerPhase { t: end - first.t() };
    let mut total = 0.0;
    for (start, stop, acc) in [
        (first.u(), last.u(), &acc_u),
        (first.v(), last.v(), &acc_v),
    ] {
        let a = transform(stop);
        let b = transform(start).multiply(|xi| free.eval(xi));
        let coeffs = a
            .coeffs()
            .iter()
            .zip(b.coeffs())
            .zip(acc)
            .map(|((x, y), z)| x - y + I * z)
            .collect();
        total += SpectralField::new(grid.clone(), coeffs)?.norm_sq().sqrt();
    }
    Ok(total)
}
