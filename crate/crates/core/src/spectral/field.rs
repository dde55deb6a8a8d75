use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Complex samples of a function on a [`Grid`].
///
/// Radial fields store `u(r_j)` itself; the `r`-weighting needed by the sine
/// transform is applied inside [`transform`](super::transform::transform).
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        if let Some(index) = samples.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Field { grid, samples })
    }

    /// Trusted constructor for internal code paths that preserve finiteness.
    pub(crate) fn from_raw(grid: Grid, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), grid.len());
        Field { grid, samples }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Field::from_raw(grid.clone(), vec![Complex64::new(0.0, 0.0); grid.len()])
    }

    /// Samples a function of |x| (radial profile).
    pub fn from_radial_fn(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = grid.radii().iter().map(|&r| f(r)).collect();
        Field::new(grid.clone(), samples)
    }

    /// Samples a function of the minimum-image position vector (periodic grids).
    pub fn from_position_fn(grid: &Grid, f: impl Fn([f64; 3]) -> Complex64) -> Result<Self> {
        if grid.is_radial() {
            return Err(Error::BackendMismatch {
                required: "periodic3d",
            });
        }
        let samples = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        Field::new(grid.clone(), samples)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|z| z.is_finite())
    }

    pub(crate) fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field::from_raw(self.grid.clone(), self.samples.iter().map(|&z| f(z)).collect())
    }

    pub(crate) fn zip_map(
        &self,
        other: &Field,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Field> {
        self.check_same_grid(other)?;
        Ok(Field::from_raw(
            self.grid.clone(),
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: Complex64) -> Field {
        self.map(|z| z * c)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a * b)
    }

    /// Largest sample modulus (excludes the origin on radial grids; see
    /// [`lebesgue_norm`](super::norms::lebesgue_norm) for the true sup norm).
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Frequency coefficients approximating `f̂(ξ) = ∫ e^{-2πi x·ξ} f(x) dx`
/// at the grid frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub(crate) fn from_raw(grid: Grid, coeffs: Vec<Complex64>) -> Self {
        SpectralField { grid, coeffs }
    }

    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(SpectralField { grid, coeffs })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Σ_k w_k |f̂_k|², equal to ‖f‖₂² by discrete Parseval.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.grid.freq_weights())
            .map(|(c, w)| w * c.norm_sqr())
            .sum()
    }

    /// Multiplies each coefficient by `symbol(|ξ|)`.
    pub fn multiply(&self, symbol: impl Fn(f64) -> Complex64) -> SpectralField {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.grid.freq_magnitudes())
            .map(|(&c, &xi)| c * symbol(xi))
            .collect();
        SpectralField::from_raw(self.grid.clone(), coeffs)
    }

    pub(crate) fn multiply_table(&self, table: &[Complex64]) -> SpectralField {
        let coeffs = self.coeffs.iter().zip(table).map(|(&c, &m)| c * m).collect();
        SpectralField::from_raw(self.grid.clone(), coeffs)
    }

    pub(crate) fn multiply_real_table(&self, table: &[f64]) -> SpectralField {
        let coeffs = self.coeffs.iter().zip(table).map(|(&c, &m)| c * m).collect();
        SpectralField::from_raw(self.grid.clone(), coeffs)
    }
}
