//! Uniform linear array geometry, steering vectors and synthetic snapshots.
//!
//! Lengths are expressed in carrier wavelengths, so the wavelength itself is
//! fixed at one. Angles are radians measured from broadside.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quantizer::Resolution;
use crate::rng;
use crate::scalar::Real;

/// Reference point convention for element positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PositionConvention {
    /// `d_m = (m - M/2) d` for `m = 1..M`; the centroid sits at `d/2`.
    #[default]
    HalfApertureOffset,
    /// `d_m = (m - (M+1)/2) d`; centroid at zero.
    Centered,
}

/// Uniform linear array.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry<T> {
    elements: usize,
    spacing: T,
    convention: PositionConvention,
    positions: Vec<T>,
}

impl<T: Real> ArrayGeometry<T> {
    /// `elements` sensors spaced `spacing` wavelengths apart.
    pub fn new(elements: usize, spacing: T, convention: PositionConvention) -> Result<Self> {
        if elements == 0 {
            return Err(Error::invalid("array needs at least one element"));
        }
        if !(spacing > T::zero()) || !spacing.is_finite() {
            return Err(Error::invalid("element spacing must be positive and finite"));
        }
        let offset = match convention {
            PositionConvention::HalfApertureOffset => T::lit(elements as f64) / T::lit(2.0),
            PositionConvention::Centered => T::lit(elements as f64 + 1.0) / T::lit(2.0),
        };
        let positions = (1..=elements).map(|m| (T::lit(m as f64) - offset) * spacing).collect();
        Ok(Self {
            elements,
            spacing,
            convention,
            positions,
        })
    }

    /// Half-wavelength array with the default position convention.
    pub fn half_wavelength(elements: usize) -> Result<Self> {
        Self::new(elements, T::lit(0.5), PositionConvention::default())
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    /// Inter-element spacing in wavelengths.
    pub fn spacing(&self) -> T {
        self.spacing
    }

    /// Always one: positions are already in wavelengths.
    pub fn wavelength(&self) -> T {
        T::one()
    }

    pub fn convention(&self) -> PositionConvention {
        self.convention
    }

    /// Element positions `d_m` in wavelengths, ascending.
    pub fn positions(&self) -> &[T] {
        &self.positions
    }

    /// Array response to a unit plane wave from `theta`.
    pub fn steering_vector(&self, theta: T) -> Result<Vec<Complex<T>>> {
        check_angle(theta)?;
        let k = T::TAU() * theta.sin() / self.wavelength();
        Ok(self.positions.iter().map(|&d| Complex::from_polar(T::one(), k * d)).collect())
    }

    /// Derivative of the steering vector with respect to `theta`.
    pub fn steering_derivative(&self, theta: T) -> Result<Vec<Complex<T>>> {
        let a = self.steering_vector(theta)?;
        let k = T::TAU() * theta.cos() / self.wavelength();
        Ok(a
            .iter()
            .zip(&self.positions)
            .map(|(am, &d)| am * Complex::new(T::zero(), k * d))
            .collect())
    }

    /// `sum_m d_m^2` in squared wavelengths.
    pub fn mean_square_aperture(&self) -> T {
        self.positions.iter().map(|&d| d * d).sum()
    }

    /// `sum_m (d_m - mean)^2`: the aperture moment about the array centroid.
    pub fn centered_square_aperture(&self) -> T {
        let mean = self.positions.iter().copied().sum::<T>() / T::lit(self.elements as f64);
        self.positions.iter().map(|&d| (d - mean) * (d - mean)).sum()
    }
}

pub(crate) fn check_angle<T: Real>(theta: T) -> Result<()> {
    if theta.is_finite() && theta.abs() < T::FRAC_PI_2() {
        Ok(())
    } else {
        Err(Error::AngleOutOfDomain(theta.as_f64()))
    }
}

/// Far-field emitters: angles in radians and linear powers.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSet<T> {
    angles: Vec<T>,
    powers: Vec<T>,
}

impl<T: Real> SourceSet<T> {
    pub fn new(angles: Vec<T>, powers: Vec<T>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::invalid("at least one source is required"));
        }
        if angles.len() != powers.len() {
            return Err(Error::invalid("one power per source angle"));
        }
        for &a in &angles {
            check_angle(a)?;
        }
        if powers.iter().any(|&p| !(p > T::zero()) || !p.is_finite()) {
            return Err(Error::invalid("source powers must be positive and finite"));
        }
        for (i, a) in angles.iter().enumerate() {
            if angles[i + 1..].contains(a) {
                return Err(Error::invalid("source angles must be distinct"));
            }
        }
        Ok(Self { angles, powers })
    }

    /// One emitter.
    pub fn single(theta: T, power: T) -> Result<Self> {
        Self::new(vec![theta], vec![power])
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn powers(&self) -> &[T] {
        &self.powers
    }

    pub fn total_power(&self) -> T {
        self.powers.iter().copied().sum()
    }

    /// Rejects source counts the geometry cannot resolve.
    pub fn check_against(&self, geometry: &ArrayGeometry<T>) -> Result<()> {
        if self.len() >= geometry.elements() {
            return Err(Error::invalid(format!(
                "{} sources need more than {} elements",
                self.len(),
                geometry.elements()
            )));
        }
        Ok(())
    }
}

/// Whether the samples have passed through an ADC model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotKind {
    Unquantized,
    Quantized(Resolution),
}

/// `M x N` complex baseband samples, one column per snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix<T> {
    pub data: CMatrix<T>,
    pub kind: SnapshotKind,
}

impl<T: Real> SnapshotMatrix<T> {
    pub fn elements(&self) -> usize {
        self.data.rows()
    }

    pub fn snapshots(&self) -> usize {
        self.data.cols()
    }
}

/// Draws `snapshots` columns of `sum_l a(theta_l) s_l(n) + w(n)` with
/// circular Gaussian sources and white noise, reproducibly from `seed`.
pub fn generate_snapshots<T: Real>(
    geometry: &ArrayGeometry<T>,
    sources: &SourceSet<T>,
    noise_power: T,
    snapshots: usize,
    seed: u64,
) -> Result<SnapshotMatrix<T>> {
    let mut rng = rng::seeded(seed);
    generate_snapshots_with(geometry, sources, noise_power, snapshots, &mut rng).map(|(y, _)| y)
}

/// As [`generate_snapshots`], drawing from `rng` and also returning the
/// `L x N` source waveforms.
///
/// The draw order per snapshot is fixed (sources, then one noise sample per
/// element) and independent of the powers, so runs that differ only in power
/// share the same underlying variates.
pub fn generate_snapshots_with<T: Real, R: Rng + ?Sized>(
    geometry: &ArrayGeometry<T>,
    sources: &SourceSet<T>,
    noise_power: T,
    snapshots: usize,
    rng: &mut R,
) -> Result<(SnapshotMatrix<T>, CMatrix<T>)> {
    if snapshots == 0 {
        return Err(Error::invalid("at least one snapshot is required"));
    }
    if !(noise_power >= T::zero()) || !noise_power.is_finite() {
        return Err(Error::invalid("noise power must be non-negative and finite"));
    }
    let m = geometry.elements();
    let steering = sources
        .angles()
        .iter()
        .map(|&th| geometry.steering_vector(th))
        .collect::<Result<Vec<_>>>()?;

    let mut data = CMatrix::zeros(m, snapshots);
    let mut waveforms = CMatrix::zeros(sources.len(), snapshots);
    for n in 0..snapshots {
        for (l, &p) in sources.powers().iter().enumerate() {
            waveforms[(l, n)] = rng::complex_normal(rng, p);
        }
        let col = data.column_mut(n);
        for (l, a) in steering.iter().enumerate() {
            let s = waveforms[(l, n)];
            for (y, am) in col.iter_mut().zip(a) {
                *y += am * s;
            }
        }
        for y in col.iter_mut() {
            *y += rng::complex_normal(rng, noise_power);
        }
    }
    Ok((
        SnapshotMatrix {
            data,
            kind: SnapshotKind::Unquantized,
        },
        waveforms,
    ))
}
