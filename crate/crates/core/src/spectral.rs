//! Real periodic functions in the eigenbasis of the periodic second derivative.
//!
//! The basis is ordered so that index `k` carries the eigenvalue `λ_k`:
//!
//! ```text
//! w_0 = 1,  w_{2j-1} = √2 cos(2πjy/ℓ),  w_{2j} = √2 sin(2πjy/ℓ),   j ≥ 1
//! ```
//!
//! with `λ_{2j-1} = λ_{2j} = (2πj/ℓ)²`. The `√2` makes the basis orthonormal
//! for the mean inner product `(1/ℓ)∫ f g`, so `Σ a_k²` is the mean square of
//! the represented function (Parseval).
//!
//! When `n_modes` is even the last slot is a cosine whose sine partner is not
//! part of the basis. Derivatives of that mode leave the truncated space and
//! are projected away: [`SpectralField::differentiate`] is the Galerkin
//! derivative `P_N ∂`. The identities `D∘𝒫 = I − Π` and `D∘D = D²` hold
//! exactly on every paired mode.

use std::f64::consts::{SQRT_2, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};

/// Collocation grid and eigenvalue layout for one period and truncation.
///
/// Cheap to clone; the FFT plans are shared.
#[derive(Clone)]
pub struct SpectralGrid {
    inner: Arc<GridInner>,
}

struct GridInner {
    period: f64,
    n_modes: usize,
    n_points: usize,
    eigenvalues: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("period", &self.period())
            .field("n_modes", &self.n_modes())
            .field("n_points", &self.n_points())
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.period() == other.period() && self.n_modes() == other.n_modes())
    }
}

/// Wavenumber index `j` of basis slot `k`.
#[inline]
pub fn wavenumber_index(k: usize) -> usize {
    k.div_ceil(2)
}

/// Number of collocation points for `n_modes`: the smallest even integer that
/// is at least `3N/2` and exceeds three times the highest wavenumber index,
/// which makes every quadratic product exact on the retained modes.
pub fn collocation_size(n_modes: usize) -> usize {
    let top = wavenumber_index(n_modes - 1);
    let at_least = (3 * n_modes).div_ceil(2).max(3 * top + 1);
    at_least + at_least % 2
}

impl SpectralGrid {
    /// Builds the grid for period `ℓ` and `n_modes ≥ 3` basis functions.
    pub fn new(period: f64, n_modes: usize) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return invalid(format!("period must be positive and finite, got {period}"));
        }
        if n_modes < 3 {
            return invalid(format!("n_modes must be at least 3, got {n_modes}"));
        }
        let base = TAU / period;
        let eigenvalues = (0..n_modes)
            .map(|k| {
                let q = wavenumber_index(k) as f64 * base;
                q * q
            })
            .collect();
        let n_points = collocation_size(n_modes);
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n_points);
        let inverse = planner.plan_fft_inverse(n_points);
        Ok(Self {
            inner: Arc::new(GridInner {
                period,
                n_modes,
                n_points,
                eigenvalues,
                forward,
                inverse,
            }),
        })
    }

    pub fn period(&self) -> f64 {
        self.inner.period
    }

    pub fn n_modes(&self) -> usize {
        self.inner.n_modes
    }

    pub fn n_points(&self) -> usize {
        self.inner.n_points
    }

    /// `λ_k` for `k = 0..N`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.inner.eigenvalues
    }

    /// Angular wavenumber `2πj/ℓ` carried by slot `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        wavenumber_index(k) as f64 * (TAU / self.period())
    }

    /// True when slot `k` is the even-`N` top cosine without a sine partner.
    pub fn is_unpaired(&self, k: usize) -> bool {
        k != 0 && k % 2 == 1 && k + 1 == self.n_modes()
    }

    /// `λ_k`, or 0 for the unpaired top cosine, so that
    /// `|D^n f|₂² = Σ weight_k^n a_k²` for the Galerkin derivative and `n ≥ 1`.
    pub fn derivative_weight(&self, k: usize) -> f64 {
        if self.is_unpaired(k) {
            0.0
        } else {
            self.eigenvalues()[k]
        }
    }

    /// Collocation abscissae `y_i = iℓ/M`, `i = 0..M`.
    pub fn points(&self) -> Vec<f64> {
        let h = self.period() / self.n_points() as f64;
        (0..self.n_points()).map(|i| i as f64 * h).collect()
    }

    pub fn zeros(&self) -> SpectralField {
        SpectralField {
            grid: self.clone(),
            coeffs: vec![0.0; self.n_modes()],
        }
    }

    /// Field with a single nonzero coefficient.
    pub fn basis_field(&self, k: usize, amplitude: f64) -> SpectralField {
        let mut f = self.zeros();
        f.coeffs[k] = amplitude;
        f
    }

    /// Samples `f` at the collocation points and transforms.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> SpectralField {
        let values: Vec<f64> = self.points().into_iter().map(f).collect();
        self.transform(&values)
            .expect("sampled value count matches the grid")
    }

    /// Projects collocation values onto the retained basis.
    pub fn transform(&self, values: &[f64]) -> Result<SpectralField> {
        if values.len() != self.n_points() {
            return invalid(format!(
                "expected {} collocation values, got {}",
                self.n_points(),
                values.len()
            ));
        }
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.inner.forward.process(&mut buf);
        Ok(SpectralField {
            grid: self.clone(),
            coeffs: self.coeffs_from_spectrum(&buf),
        })
    }

    fn coeffs_from_spectrum(&self, spectrum: &[Complex64]) -> Vec<f64> {
        let scale = 1.0 / self.n_points() as f64;
        let mut coeffs = vec![0.0; self.n_modes()];
        coeffs[0] = spectrum[0].re * scale;
        for k in 1..self.n_modes() {
            let c = spectrum[wavenumber_index(k)];
            coeffs[k] = if k % 2 == 1 {
                SQRT_2 * c.re * scale
            } else {
                -SQRT_2 * c.im * scale
            };
        }
        coeffs
    }

    /// Full complex spectrum (length `M`) of the real function with the given
    /// coefficients. `extra` adds a sine coefficient to the top wavenumber,
    /// used for the derivative of the unpaired cosine.
    fn spectrum_from_coeffs(&self, coeffs: &[f64], extra_top_sine: f64) -> Vec<Complex64> {
        let m = self.n_points();
        let mut spec = vec![Complex64::new(0.0, 0.0); m];
        spec[0] = Complex64::new(coeffs[0], 0.0);
        let pairs = wavenumber_index(self.n_modes() - 1);
        for j in 1..=pairs {
            let c = coeffs[2 * j - 1];
            let s = coeffs.get(2 * j).copied().unwrap_or(extra_top_sine);
            let z = Complex64::new(c, -s) / SQRT_2;
            spec[j] = z;
            spec[m - j] = z.conj();
        }
        spec
    }

    fn values_from_spectrum(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        self.inner.inverse.process(&mut spectrum);
        spectrum.into_iter().map(|z| z.re).collect()
    }
}

/// Coefficient vector of a real `ℓ`-periodic function in the `w_k` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: SpectralGrid,
    coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn new(grid: &SpectralGrid, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != grid.n_modes() {
            return invalid(format!(
                "expected {} coefficients, got {}",
                grid.n_modes(),
                coeffs.len()
            ));
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Values at the collocation points.
    pub fn inverse_transform(&self) -> Vec<f64> {
        self.grid
            .values_from_spectrum(self.grid.spectrum_from_coeffs(&self.coeffs, 0.0))
    }

    /// Evaluates the truncated expansion at an arbitrary abscissa.
    pub fn eval(&self, y: f64) -> f64 {
        let mut acc = self.coeffs[0];
        for k in 1..self.coeffs.len() {
            let arg = self.grid.wavenumber(k) * y;
            let w = if k % 2 == 1 { arg.cos() } else { arg.sin() };
            acc += SQRT_2 * self.coeffs[k] * w;
        }
        acc
    }

    /// Galerkin derivative `(P_N ∂)^order`.
    pub fn differentiate(&self, order: usize) -> Result<Self> {
        if order == 0 {
            return invalid("derivative order must be at least 1");
        }
        let mut out = self.clone();
        for _ in 0..order {
            out.differentiate_once();
        }
        Ok(out)
    }

    fn differentiate_once(&mut self) {
        let n = self.coeffs.len();
        self.coeffs[0] = 0.0;
        let mut k = 1;
        while k < n {
            let q = self.grid.wavenumber(k);
            if k + 1 < n {
                let (c, s) = (self.coeffs[k], self.coeffs[k + 1]);
                self.coeffs[k] = q * s;
                self.coeffs[k + 1] = -q * c;
            } else {
                self.coeffs[k] = 0.0;
            }
            k += 2;
        }
    }

    /// `P_N(f²)`: the pointwise square projected on the retained modes, free
    /// of aliasing.
    pub fn dealiased_square(&self) -> Self {
        let values = self.inverse_transform();
        self.square_values(values)
    }

    /// `P_N((∂f)²)` including the sine partner of an unpaired top cosine.
    pub fn square_of_derivative(&self) -> Self {
        let n = self.coeffs.len();
        let mut deriv = self.clone();
        let mut top_sine = 0.0;
        if self.grid.is_unpaired(n - 1) {
            top_sine = -self.grid.wavenumber(n - 1) * self.coeffs[n - 1];
        }
        deriv.differentiate_once();
        let values = self
            .grid
            .values_from_spectrum(self.grid.spectrum_from_coeffs(&deriv.coeffs, top_sine));
        self.square_values(values)
    }

    fn square_values(&self, mut values: Vec<f64>) -> Self {
        for v in &mut values {
            *v *= *v;
        }
        self.grid.transform(&values).expect("grid-sized buffer")
    }

    /// Root-mean-square norm `|f|₂ = (Σ a_k²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// `‖f‖_s = (Σ λ_k^s a_k²)^{1/2}`; the mean mode only counts for `s = 0`.
    pub fn sobolev_norm(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return invalid(format!("Sobolev order must be non-negative, got {s}"));
        }
        let sum: f64 = self
            .grid
            .eigenvalues()
            .iter()
            .zip(&self.coeffs)
            .map(|(&lam, &a)| lam.powf(s) * a * a)
            .sum();
        Ok(sum.sqrt())
    }

    /// `Π f`, the mean value.
    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    /// Splits into `(Π f, (I − Π) f)`.
    pub fn mean_projection(&self) -> (f64, Self) {
        let mut rest = self.clone();
        rest.coeffs[0] = 0.0;
        (self.coeffs[0], rest)
    }

    /// The zero-mean periodic antiderivative `𝒫(ζ) = (I − Π)∫ζ`.
    pub fn antiderivative(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = self.grid.zeros();
        let mut k = 1;
        while k + 1 < n {
            let q = self.grid.wavenumber(k);
            out.coeffs[k] = -self.coeffs[k + 1] / q;
            out.coeffs[k + 1] = self.coeffs[k] / q;
            k += 2;
        }
        out
    }

    /// Maximum absolute value over the collocation points.
    pub fn sup_norm(&self) -> f64 {
        self.inverse_transform()
            .into_iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return invalid("fields live on different grids");
        }
        Ok(())
    }

    /// `self + scale * other`.
    pub fn axpy(&self, scale: f64, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            coeffs,
        })
    }

    pub fn scaled(&self, scale: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|a| scale * a).collect(),
        }
    }

    /// Copies the coefficients onto another grid with the same period,
    /// truncating or zero-padding.
    pub fn resample(&self, grid: &SpectralGrid) -> Result<Self> {
        if grid.period() != self.grid.period() {
            return invalid("resampling requires equal periods");
        }
        let mut coeffs = vec![0.0; grid.n_modes()];
        let n = coeffs.len().min(self.coeffs.len());
        coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        // A slot that was paired on the source grid may be unpaired on the
        // target; its cosine coefficient is kept as is.
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_finite())
    }
}
