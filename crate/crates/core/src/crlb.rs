//! Cramér-Rao bound for single-source DOA estimation behind b-bit ADCs.
//!
//! Under the AQNM the quantized covariance is
//! `R = alpha^2 sigma_s^2 a a^H + sigma_1^2 I` with
//! `sigma_1^2 = alpha^2 sigma_w^2 + alpha beta (sigma_s^2 + sigma_w^2)`, so
//! quantization acts as a loss of SNR. The Fisher information is available
//! both from the trace formula (`fim_numeric`) and in closed form.

use num_complex::Complex;

use crate::array_model::{check_angle, ArrayGeometry};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quantizer::{distortion_factor, QuantizerSpec, Resolution};
use crate::scalar::Real;

/// One emitter seen by a quantized array.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatingPoint<T> {
    pub geometry: ArrayGeometry<T>,
    pub theta: T,
    pub signal_power: T,
    pub noise_power: T,
    pub snapshots: usize,
    pub spec: QuantizerSpec<T>,
}

impl<T: Real> OperatingPoint<T> {
    pub fn new(
        geometry: ArrayGeometry<T>,
        theta: T,
        signal_power: T,
        noise_power: T,
        snapshots: usize,
        spec: QuantizerSpec<T>,
    ) -> Result<Self> {
        check_angle(theta)?;
        if !(signal_power > T::zero() && noise_power > T::zero()) {
            return Err(Error::invalid("signal and noise powers must be positive"));
        }
        if snapshots == 0 {
            return Err(Error::invalid("at least one snapshot is required"));
        }
        Ok(Self {
            geometry,
            theta,
            signal_power,
            noise_power,
            snapshots,
            spec,
        })
    }

    /// Input SNR `gamma = sigma_s^2 / sigma_w^2`.
    pub fn input_snr(&self) -> T {
        self.signal_power / self.noise_power
    }

    /// `sigma_1^2`, the white part of the quantized covariance.
    pub fn noise_floor(&self) -> T {
        let QuantizerSpec { alpha, beta, .. } = self.spec;
        alpha * alpha * self.noise_power + alpha * beta * (self.signal_power + self.noise_power)
    }

    /// Post-quantization SNR `alpha sigma_s^2 / (beta sigma_s^2 + sigma_w^2)`.
    pub fn effective_snr(&self) -> T {
        let QuantizerSpec { alpha, beta, .. } = self.spec;
        alpha * self.signal_power / (beta * self.signal_power + self.noise_power)
    }

    /// Quantized covariance `alpha^2 sigma_s^2 a a^H + sigma_1^2 I`.
    pub fn covariance(&self) -> Result<CMatrix<T>> {
        let a = self.geometry.steering_vector(self.theta)?;
        let g = self.spec.alpha * self.spec.alpha * self.signal_power;
        let floor = self.noise_floor();
        let m = a.len();
        Ok(CMatrix::from_fn(m, m, |i, j| {
            let diag = if i == j { floor } else { T::zero() };
            a[i] * a[j].conj() * g + Complex::new(diag, T::zero())
        }))
    }

    /// `dR/dθ = alpha^2 sigma_s^2 (ȧ a^H + a ȧ^H)` with
    /// `ȧ_m = j 2π (d_m / λ) cos θ a_m`.
    pub fn covariance_derivative(&self) -> Result<CMatrix<T>> {
        let a = self.geometry.steering_vector(self.theta)?;
        let da = self.geometry.steering_derivative(self.theta)?;
        let g = self.spec.alpha * self.spec.alpha * self.signal_power;
        let m = a.len();
        Ok(CMatrix::from_fn(m, m, |i, j| (da[i] * a[j].conj() + a[i] * da[j].conj()) * g))
    }

    /// Per-snapshot Fisher information `Tr{R^-1 Ṙ R^-1 Ṙ}` by explicit
    /// matrix construction and inversion.
    pub fn fim_numeric(&self) -> Result<T> {
        let r = self.covariance()?;
        let dr = self.covariance_derivative()?;
        let rinv = linalg::hermitian_pd_inverse(&r)
            .map_err(|_| Error::Numerical("quantized covariance is singular".into()))?;
        let x = rinv.matmul(&dr);
        let m = x.rows();
        let mut tr = Complex::new(T::zero(), T::zero());
        for i in 0..m {
            for j in 0..m {
                tr += x[(i, j)] * x[(j, i)];
            }
        }
        Ok(tr.re)
    }

    /// `2 gamma_yq (2π/λ)^2 cos^2 θ sum_m d_m^2`.
    pub fn fim_closed_form(&self) -> T {
        let k = T::TAU() / self.geometry.wavelength();
        let c = self.theta.cos();
        T::lit(2.0) * self.effective_snr() * k * k * c * c * self.geometry.mean_square_aperture()
    }

    /// Ratio `M gamma_yq / (M gamma_yq + 1)` separating the exact trace-formula
    /// information from the closed form (for a centered array).
    pub fn large_array_factor(&self) -> T {
        let mg = T::lit(self.geometry.elements() as f64) * self.effective_snr();
        mg / (mg + T::one())
    }

    /// Closed-form bound `1 / (N fim_closed_form)` in rad².
    pub fn crlb(&self) -> T {
        T::one() / (T::lit(self.snapshots as f64) * self.fim_closed_form())
    }

    /// `1 / (N fim_numeric)` in rad².
    pub fn crlb_exact(&self) -> Result<T> {
        Ok(T::one() / (T::lit(self.snapshots as f64) * self.fim_numeric()?))
    }

    /// Same point with a different converter.
    pub fn with_spec(&self, spec: QuantizerSpec<T>) -> Self {
        Self { spec, ..self.clone() }
    }
}

/// `10 log10((1 + beta gamma) / alpha)`: CRLB penalty of b-bit conversion in dB
/// at input SNR `gamma` (linear).
pub fn performance_loss_db<T: Real>(resolution: Resolution, gamma: T) -> Result<T> {
    if !(gamma > T::zero()) {
        return Err(Error::invalid("input SNR must be positive"));
    }
    let beta: T = distortion_factor(resolution)?;
    let alpha = T::one() - beta;
    Ok(T::lit(10.0) * ((T::one() + beta * gamma) / alpha).log10())
}

/// dB to linear power ratio.
pub fn db_to_linear<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}
