use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Coupling constants of `iu_t+Δu=λ|v|²u, iv_t+Δv=μ|u|²v` plus the I-method
/// regularity `s` and threshold `N`.
///
/// `λ = μ = 0` is admitted as a linear test mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub lambda: f64,
    pub mu: f64,
    pub s: f64,
    pub threshold: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams {
            lambda: 1.0,
            mu: 1.0,
            s: 0.75,
            threshold: 16.0,
        }
    }
}

impl PhysParams {
    pub fn new(lambda: f64, mu: f64, s: f64, threshold: f64) -> Result<Self> {
        let p = PhysParams {
            lambda,
            mu,
            s,
            threshold,
        };
        p.validate()?;
        Ok(p)
    }

    /// Linear mode with default I-method parameters.
    pub fn linear() -> Self {
        PhysParams {
            lambda: 0.0,
            mu: 0.0,
            ..Default::default()
        }
    }

    pub fn couplings(lambda: f64, mu: f64) -> Result<Self> {
        Self::new(lambda, mu, 0.75, 16.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda", self.lambda), ("mu", self.mu)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(param(name, format!("coupling must be finite and >= 0, got {v}")));
            }
        }
        if !(-2.0..=2.0).contains(&self.s) {
            return Err(param("s", format!("regularity must lie in [-2, 2], got {}", self.s)));
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(param(
                "N",
                format!("threshold must be positive and finite, got {}", self.threshold),
            ));
        }
        Ok(())
    }

    pub fn is_linear(&self) -> bool {
        self.lambda == 0.0 && self.mu == 0.0
    }
}
