//! Discretizations of R^3 used by every field.
//!
//! A [`Grid`] is cheap to clone: the sample tables, quadrature weights and
//! FFT plans live behind an `Arc` and are immutable after construction.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible resolution.
pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum GridKind {
    /// Radial functions sampled at `r_j = j R / n`, `j = 1..n-1`.
    Radial1D { radius: f64, n: usize },
    /// Periodic box `[0, L)^3` with `n` samples per axis.
    Periodic3D { box_len: f64, n: usize },
}

impl GridKind {
    pub fn n(&self) -> usize {
        match *self {
            GridKind::Radial1D { n, .. } | GridKind::Periodic3D { n, .. } => n,
        }
    }

    /// Outer radius for the radial grid, box edge for the periodic one.
    pub fn length(&self) -> f64 {
        match *self {
            GridKind::Radial1D { radius, .. } => radius,
            GridKind::Periodic3D { box_len, .. } => box_len,
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self, GridKind::Radial1D { .. })
    }

    pub fn with_length(&self, length: f64) -> GridKind {
        match *self {
            GridKind::Radial1D { n, .. } => GridKind::Radial1D { radius: length, n },
            GridKind::Periodic3D { n, .. } => GridKind::Periodic3D { box_len: length, n },
        }
    }
}

struct GridInner {
    kind: GridKind,
    /// |x| of every sample (minimum-image distance to the origin on the torus).
    radii: Vec<f64>,
    /// |xi| of every spectral coefficient.
    freq_mag: Vec<f64>,
    space_weights: Vec<f64>,
    freq_weights: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Grid").field(&self.inner.kind).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.kind == other.inner.kind
    }
}

/// Builds a grid; `make_grid` in operation form.
pub fn make_grid(kind: GridKind) -> Result<Grid> {
    Grid::new(kind)
}

impl Grid {
    pub fn new(kind: GridKind) -> Result<Self> {
        let n = kind.n();
        if n < MIN_RESOLUTION {
            return Err(Error::InvalidGrid(format!(
                "n={n} is below the minimum resolution {MIN_RESOLUTION}"
            )));
        }
        let length = kind.length();
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        let mut planner = FftPlanner::new();
        let inner = match kind {
            GridKind::Radial1D { radius, n } => {
                let dr = radius / n as f64;
                let drho = 1.0 / (2.0 * radius);
                let radii: Vec<f64> = (1..n).map(|j| j as f64 * dr).collect();
                let freq_mag: Vec<f64> = (1..n).map(|k| k as f64 * drho).collect();
                let space_weights = radii.iter().map(|r| 4.0 * PI * r * r * dr).collect();
                let freq_weights = freq_mag.iter().map(|p| 4.0 * PI * p * p * drho).collect();
                // Sine and cosine sums are realized through odd/even extensions of length 2n.
                let forward = planner.plan_fft_forward(2 * n);
                GridInner {
                    kind,
                    radii,
                    freq_mag,
                    space_weights,
                    freq_weights,
                    inverse: forward.clone(),
                    forward,
                }
            }
            GridKind::Periodic3D { box_len, n } => {
                if n % 2 != 0 {
                    return Err(Error::InvalidGrid(format!(
                        "periodic resolution must be even, got {n}"
                    )));
                }
                let dx = box_len / n as f64;
                let total = n * n * n;
                let mut radii = Vec::with_capacity(total);
                let mut freq_mag = Vec::with_capacity(total);
                for idx in 0..total {
                    let m = unravel(idx, n);
                    let x = m.map(|i| wrap_index(i, n) as f64 * dx);
                    radii.push((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt());
                    let k = m.map(|i| signed_mode(i, n) as f64 / box_len);
                    freq_mag.push((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt());
                }
                GridInner {
                    kind,
                    radii,
                    freq_mag,
                    space_weights: vec![dx * dx * dx; total],
                    freq_weights: vec![1.0 / (box_len * box_len * box_len); total],
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                }
            }
        };
        Ok(Grid {
            inner: Arc::new(inner),
        })
    }

    pub fn radial(radius: f64, n: usize) -> Result<Self> {
        Self::new(GridKind::Radial1D { radius, n })
    }

    pub fn periodic(box_len: f64, n: usize) -> Result<Self> {
        Self::new(GridKind::Periodic3D { box_len, n })
    }

    pub fn kind(&self) -> GridKind {
        self.inner.kind
    }

    pub fn n(&self) -> usize {
        self.inner.kind.n()
    }

    pub fn is_radial(&self) -> bool {
        self.inner.kind.is_radial()
    }

    /// Number of spatial samples (n-1 radial, n^3 periodic).
    pub fn len(&self) -> usize {
        self.inner.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.radii.is_empty()
    }

    /// Sample spacing (dr or dx).
    pub fn spacing(&self) -> f64 {
        self.inner.kind.length() / self.n() as f64
    }

    /// Frequency spacing (drho = 1/(2R) radial, 1/L periodic).
    pub fn freq_spacing(&self) -> f64 {
        match self.inner.kind {
            GridKind::Radial1D { radius, .. } => 1.0 / (2.0 * radius),
            GridKind::Periodic3D { box_len, .. } => 1.0 / box_len,
        }
    }

    /// Radius of the largest ball centred at the origin that fits the domain.
    pub fn max_radius(&self) -> f64 {
        match self.inner.kind {
            GridKind::Radial1D { radius, .. } => radius,
            GridKind::Periodic3D { box_len, .. } => 0.5 * box_len,
        }
    }

    /// Largest |xi| resolved along an axis.
    pub fn max_frequency(&self) -> f64 {
        self.inner
            .freq_mag
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn radii(&self) -> &[f64] {
        &self.inner.radii
    }

    pub fn freq_magnitudes(&self) -> &[f64] {
        &self.inner.freq_mag
    }

    pub fn space_weights(&self) -> &[f64] {
        &self.inner.space_weights
    }

    pub fn freq_weights(&self) -> &[f64] {
        &self.inner.freq_weights
    }

    /// Signed minimum-image coordinates of a periodic sample.
    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let n = self.n();
        let dx = self.spacing();
        unravel(idx, n).map(|i| wrap_index(i, n) as f64 * dx)
    }

    /// Signed frequency vector xi = m / L of a periodic coefficient.
    pub fn freq_vector(&self, idx: usize) -> [f64; 3] {
        let n = self.n();
        let l = self.inner.kind.length();
        unravel(idx, n).map(|i| signed_mode(i, n) as f64 / l)
    }

    pub(crate) fn forward_plan(&self) -> &Arc<dyn Fft<f64>> {
        &self.inner.forward
    }

    pub(crate) fn inverse_plan(&self) -> &Arc<dyn Fft<f64>> {
        &self.inner.inverse
    }
}

#[inline]
pub(crate) fn unravel(idx: usize, n: usize) -> [usize; 3] {
    [idx / (n * n), (idx / n) % n, idx % n]
}

/// FFT index to signed mode number; Nyquist maps to +n/2.
#[inline]
pub(crate) fn signed_mode(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Position index to minimum-image offset in [-n/2, n/2).
#[inline]
pub(crate) fn wrap_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}
