use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, PhysParams};

/// The pair `(u, v)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    pub(crate) t: f64,
    pub(crate) u: Field,
    pub(crate) v: Field,
    pub(crate) params: PhysParams,
}

impl CoupledState {
    pub fn new(u: Field, v: Field, params: PhysParams) -> Result<Self> {
        Self::at_time(0.0, u, v, params)
    }

    pub fn at_time(t: f64, u: Field, v: Field, params: PhysParams) -> Result<Self> {
        if u.grid() != v.grid() {
            return Err(Error::GridMismatch);
        }
        if !t.is_finite() {
            return Err(crate::error::param("t", "time must be finite"));
        }
        params.validate()?;
        Ok(CoupledState { t, u, v, params })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn u(&self) -> &Field {
        &self.u
    }

    pub fn v(&self) -> &Field {
        &self.v
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn with_params(&self, params: PhysParams) -> Result<Self> {
        params.validate()?;
        Ok(CoupledState {
            params,
            ..self.clone()
        })
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    pub fn into_fields(self) -> (Field, Field) {
        (self.u, self.v)
    }
}
