//! Radial Fourier symbols.
//!
//! Every symbol here is a function of `|ξ|` alone, so all multipliers
//! commute with each other and with the gradient.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Bump profile: 1 on `[0, 1]`, 0 on `[2, ∞)`, quintic smootherstep between.
pub fn psi(x: f64) -> f64 {
    let x = x.abs();
    if x <= 1.0 {
        1.0
    } else if x >= 2.0 {
        0.0
    } else {
        let t = x - 1.0;
        1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    }
}

/// Annulus cutoff `χ(x) = ψ(x/2) - ψ(x)`, supported in `1 ≤ |x| ≤ 4`.
pub fn chi(x: f64) -> f64 {
    psi(0.5 * x) - psi(x)
}

/// Littlewood–Paley symbol `φ_j(ξ) = ψ(2^{-j}ξ) - ψ(2^{-j+1}ξ)`.
pub fn lp_symbol(j: i32, xi: f64) -> f64 {
    let scale = 2f64.powi(-j);
    psi(scale * xi) - psi(2.0 * scale * xi)
}

/// I-operator symbol `m_N(ξ)`: 1 below `N`, `(N/|ξ|)^{1-s}` above `2N`, and a
/// C¹ monotone log-space smoothstep blend in between.
pub fn i_symbol(xi: f64, threshold: f64, s: f64) -> f64 {
    if xi <= threshold {
        return 1.0;
    }
    let log_tail = (1.0 - s) * (threshold / xi).ln();
    if xi >= 2.0 * threshold {
        return log_tail.exp();
    }
    let theta = (xi / threshold).log2();
    let sigma = theta * theta * (3.0 - 2.0 * theta);
    (sigma * log_tail).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierSpec {
    /// `|ξ|^s` (zero at the origin when `s < 0`).
    FractionalPower { s: f64 },
    /// `(1 + |ξ|²)^{s/2}`.
    InhomogeneousPower { s: f64 },
    LittlewoodPaley { j: i32 },
    /// `ψ(|ξ|/N)`: identity on `|ξ| ≤ N`, zero beyond `2N`.
    LowPass { cutoff: f64 },
    /// `1 - ψ(|ξ|/N)`.
    HighPass { cutoff: f64 },
    IOperator { threshold: f64, s: f64 },
    /// Free propagator `e^{itΔ}`: `e^{-4π²it|ξ|²}`.
    SchrodingerPhase { t: f64 },
}

impl MultiplierSpec {
    pub fn eval(&self, xi: f64) -> Complex64 {
        match *self {
            MultiplierSpec::SchrodingerPhase { t } => {
                Complex64::from_polar(1.0, -4.0 * PI * PI * t * xi * xi)
            }
            _ => Complex64::new(self.eval_real(xi).unwrap_or(0.0), 0.0),
        }
    }

    /// Value of a real symbol; `None` for the complex Schrödinger phase.
    pub fn eval_real(&self, xi: f64) -> Option<f64> {
        let xi = xi.abs();
        Some(match *self {
            MultiplierSpec::FractionalPower { s } => {
                if xi == 0.0 {
                    if s == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    xi.powf(s)
                }
            }
            MultiplierSpec::InhomogeneousPower { s } => (1.0 + xi * xi).powf(0.5 * s),
            MultiplierSpec::LittlewoodPaley { j } => lp_symbol(j, xi),
            MultiplierSpec::LowPass { cutoff } => psi(xi / cutoff),
            MultiplierSpec::HighPass { cutoff } => 1.0 - psi(xi / cutoff),
            MultiplierSpec::IOperator { threshold, s } => i_symbol(xi, threshold, s),
            MultiplierSpec::SchrodingerPhase { .. } => return None,
        })
    }
}

pub fn eval_symbol(spec: &MultiplierSpec, xi_mag: f64) -> Complex64 {
    spec.eval(xi_mag)
}
