//! Low-resolution ADC models.
//!
//! Two views of a b-bit converter are provided: a true componentwise
//! Lloyd-Max quantizer designed for Gaussian input, and the additive
//! quantization noise model (AQNM) that replaces it with a linear gain
//! `alpha = 1 - beta` plus independent Gaussian noise.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use crate::array_model::{ArrayGeometry, SnapshotKind, SnapshotMatrix, SourceSet};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rng;
use crate::scalar::Real;

/// Minimum-distortion factors for Gaussian input, b = 1..=5.
pub const DISTORTION_TABLE: [f64; 5] = [0.3634, 0.1175, 0.03454, 0.009497, 0.002499];

/// ADC bit depth; `Infinite` stands for an ideal converter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resolution {
    Bits(u32),
    Infinite,
}

impl Resolution {
    pub fn bits(self) -> Option<u32> {
        match self {
            Resolution::Bits(b) => Some(b),
            Resolution::Infinite => None,
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Bits(b) => write!(f, "{b}"),
            Resolution::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Resolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinite" | "∞" => Ok(Resolution::Infinite),
            other => other
                .parse::<u32>()
                .map(Resolution::Bits)
                .map_err(|_| Error::Config(format!("bad bit depth {other:?}"))),
        }
    }
}

impl Serialize for Resolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Resolution::Bits(b) => s.serialize_u32(*b),
            Resolution::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Resolution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(b) => Ok(Resolution::Bits(b)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Distortion factor `beta(b)`: tabulated for b <= 5, `(sqrt(3) pi / 2) 2^(-2b)`
/// beyond, zero for an ideal converter.
pub fn distortion_factor<T: Real>(resolution: Resolution) -> Result<T> {
    match resolution {
        Resolution::Infinite => Ok(T::zero()),
        Resolution::Bits(0) => Err(Error::invalid("bit depth must be at least 1")),
        Resolution::Bits(b @ 1..=5) => Ok(T::lit(DISTORTION_TABLE[b as usize - 1])),
        Resolution::Bits(b) => {
            let c = T::lit(3.0).sqrt() * T::PI() / T::lit(2.0);
            Ok(c * T::lit(2.0).powi(-2 * b as i32))
        }
    }
}

/// Bit depth with its AQNM gain and distortion factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerSpec<T> {
    pub resolution: Resolution,
    pub beta: T,
    pub alpha: T,
}

impl<T: Real> QuantizerSpec<T> {
    pub fn new(resolution: Resolution) -> Result<Self> {
        let beta = distortion_factor(resolution)?;
        Ok(Self {
            resolution,
            beta,
            alpha: T::one() - beta,
        })
    }

    pub fn bits(b: u32) -> Result<Self> {
        Self::new(Resolution::Bits(b))
    }

    pub fn ideal() -> Self {
        Self::new(Resolution::Infinite).expect("ideal converter is valid")
    }
}

/// Reproduction levels and decision thresholds of a scalar quantizer.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook<T> {
    bits: u32,
    levels: Vec<T>,
    thresholds: Vec<T>,
}

impl<T: Real> Codebook<T> {
    /// Validates ordering: `levels[k] < thresholds[k] < levels[k + 1]`.
    pub fn new(bits: u32, levels: Vec<T>, thresholds: Vec<T>) -> Result<Self> {
        if bits == 0 || bits > 24 || levels.len() != 1usize << bits || thresholds.len() + 1 != levels.len() {
            return Err(Error::invalid("codebook sizes do not match the bit depth"));
        }
        let ordered = thresholds
            .iter()
            .enumerate()
            .all(|(k, &t)| levels[k] < t && t < levels[k + 1]);
        if !ordered || levels.iter().chain(&thresholds).any(|x| !x.is_finite()) {
            return Err(Error::invalid("codebook levels and thresholds must interleave"));
        }
        Ok(Self {
            bits,
            levels,
            thresholds,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn thresholds(&self) -> &[T] {
        &self.thresholds
    }

    /// Index of the cell containing `x`. Ties on a threshold go up.
    pub fn cell(&self, x: T) -> usize {
        self.thresholds.partition_point(|&t| t <= x)
    }

    pub fn quantize(&self, x: T) -> T {
        self.levels[self.cell(x)]
    }

    /// Mean squared error for a standard normal input, evaluated in closed form.
    pub fn gaussian_mse(&self) -> f64 {
        let levels: Vec<f64> = self.levels.iter().map(|x| x.as_f64()).collect();
        let thresholds: Vec<f64> = self.thresholds.iter().map(|x| x.as_f64()).collect();
        gaussian_mse(&levels, &thresholds)
    }

    pub fn cast<U: Real>(&self) -> Codebook<U> {
        Codebook {
            bits: self.bits,
            levels: self.levels.iter().map(|x| U::lit(x.as_f64())).collect(),
            thresholds: self.thresholds.iter().map(|x| U::lit(x.as_f64())).collect(),
        }
    }
}

fn std_pdf(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
    }
}

fn upper_tail(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `P(a < X < b)` for standard normal `X`, formed from tails to keep
/// precision in the outer cells.
fn cell_probability(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        upper_tail(a) - upper_tail(b)
    } else if b <= 0.0 {
        upper_tail(-b) - upper_tail(-a)
    } else {
        1.0 - upper_tail(b) - upper_tail(-a)
    }
}

fn x_pdf(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        x * std_pdf(x)
    }
}

/// Gaussian MSE of an arbitrary (levels, thresholds) pair.
pub fn gaussian_mse(levels: &[f64], thresholds: &[f64]) -> f64 {
    assert_eq!(levels.len(), thresholds.len() + 1);
    let edge = |k: usize| -> (f64, f64) {
        let lo = if k == 0 { f64::NEG_INFINITY } else { thresholds[k - 1] };
        let hi = if k == thresholds.len() { f64::INFINITY } else { thresholds[k] };
        (lo, hi)
    };
    levels
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let (a, b) = edge(k);
            let p = cell_probability(a, b);
            let m1 = std_pdf(a) - std_pdf(b);
            let m2 = p + x_pdf(a) - x_pdf(b);
            m2 - 2.0 * l * m1 + l * l * p
        })
        .sum()
}

/// Iteration cap for [`design_lloyd_max`].
pub const LLOYD_MAX_ITERATIONS: usize = 100_000;

/// Lloyd-Max codebook for a zero-mean unit-variance Gaussian.
///
/// Levels start at the normal quantiles of the cell midpoints `(k + 1/2) / 2^b`
/// and the centroid / midpoint conditions are alternated until no level moves
/// by more than `tol`.
pub fn design_lloyd_max<T: Real>(bits: u32, tol: f64) -> Result<Codebook<T>> {
    if !(1..=10).contains(&bits) {
        return Err(Error::invalid("Lloyd-Max design supports 1 to 10 bits"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = 1usize << bits;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut levels: Vec<f64> = (0..n).map(|k| normal.inverse_cdf((k as f64 + 0.5) / n as f64)).collect();
    let mut thresholds = vec![0.0; n - 1];

    let mut converged = false;
    for _ in 0..LLOYD_MAX_ITERATIONS {
        for (k, t) in thresholds.iter_mut().enumerate() {
            *t = 0.5 * (levels[k] + levels[k + 1]);
        }
        let mut moved = 0.0f64;
        for k in 0..n {
            let a = if k == 0 { f64::NEG_INFINITY } else { thresholds[k - 1] };
            let b = if k == n - 1 { f64::INFINITY } else { thresholds[k] };
            let next = (std_pdf(a) - std_pdf(b)) / cell_probability(a, b);
            moved = moved.max((next - levels[k]).abs());
            levels[k] = next;
        }
        // odd symmetry of the Gaussian
        for k in 0..n / 2 {
            let v = 0.5 * (levels[n - 1 - k] - levels[k]);
            levels[k] = -v;
            levels[n - 1 - k] = v;
        }
        if moved < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Lloyd-Max design for {bits} bits did not reach tolerance {tol:e}"
        )));
    }
    for (k, t) in thresholds.iter_mut().enumerate() {
        *t = 0.5 * (levels[k] + levels[k + 1]);
    }
    thresholds[n / 2 - 1] = 0.0;
    Codebook::new(
        bits,
        levels.into_iter().map(T::lit).collect(),
        thresholds.into_iter().map(T::lit).collect(),
    )
}

/// Per-real-dimension standard deviation of a circular Gaussian input with
/// total power `total_power`: the ideal AGC scale.
pub fn input_scale<T: Real>(total_power: T) -> T {
    (total_power / T::lit(2.0)).sqrt()
}

/// Quantizes real and imaginary parts independently:
/// `scale * nearest_level(x / scale)`.
pub fn quantize_snapshots<T: Real>(
    y: &SnapshotMatrix<T>,
    codebook: &Codebook<T>,
    input_scale: T,
) -> Result<SnapshotMatrix<T>> {
    if !(input_scale > T::zero()) || !input_scale.is_finite() {
        return Err(Error::invalid("input scale must be positive and finite"));
    }
    let q = |x: T| codebook.quantize(x / input_scale) * input_scale;
    let data = CMatrix::from_fn(y.data.rows(), y.data.cols(), |i, j| {
        let z = y.data[(i, j)];
        Complex::new(q(z.re), q(z.im))
    });
    Ok(SnapshotMatrix {
        data,
        kind: SnapshotKind::Quantized(Resolution::Bits(codebook.bits())),
    })
}

/// AQNM surrogate `alpha * y + w_q`, `w_q ~ CN(0, alpha beta P I)` with
/// `P` the total input power per antenna.
pub fn aqnm_transform<T: Real>(
    y: &SnapshotMatrix<T>,
    spec: &QuantizerSpec<T>,
    total_input_power: T,
    seed: u64,
) -> Result<SnapshotMatrix<T>> {
    aqnm_transform_with(y, spec, total_input_power, &mut rng::seeded(seed))
}

/// As [`aqnm_transform`], drawing the quantization noise from `rng`.
pub fn aqnm_transform_with<T: Real, R: Rng + ?Sized>(
    y: &SnapshotMatrix<T>,
    spec: &QuantizerSpec<T>,
    total_input_power: T,
    rng: &mut R,
) -> Result<SnapshotMatrix<T>> {
    if !(total_input_power > T::zero()) {
        return Err(Error::invalid("total input power must be positive"));
    }
    let kind = SnapshotKind::Quantized(spec.resolution);
    if spec.beta == T::zero() {
        return Ok(SnapshotMatrix {
            data: y.data.clone(),
            kind,
        });
    }
    let var = spec.alpha * spec.beta * total_input_power;
    let mut data = y.data.scale(spec.alpha);
    for j in 0..data.cols() {
        for z in data.column_mut(j) {
            *z += rng::complex_normal(rng, var);
        }
    }
    Ok(SnapshotMatrix { data, kind })
}

/// Covariance of the AQNM quantization noise; diagonal by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseCovariance<T> {
    pub matrix: CMatrix<T>,
}

impl<T: Real> NoiseCovariance<T> {
    pub fn is_diagonal(&self) -> bool {
        let m = &self.matrix;
        (0..m.cols()).all(|j| (0..m.rows()).all(|i| i == j || m[(i, j)] == Complex::new(T::zero(), T::zero())))
    }
}

/// `alpha beta (sum_l sigma_l^2 + sigma_w^2) I_M`, taking every normalized
/// source covariance as the identity.
pub fn quantization_noise_covariance<T: Real>(
    sources: &SourceSet<T>,
    noise_power: T,
    geometry: &ArrayGeometry<T>,
    spec: &QuantizerSpec<T>,
) -> NoiseCovariance<T> {
    let v = spec.alpha * spec.beta * (sources.total_power() + noise_power);
    NoiseCovariance {
        matrix: CMatrix::from_real_diagonal(&vec![v; geometry.elements()]),
    }
}

/// Noise floor of the quantized covariance:
/// `alpha^2 sigma_w^2 + alpha beta (sum_l sigma_l^2 + sigma_w^2)`.
pub fn aqnm_noise_floor<T: Real>(total_signal_power: T, noise_power: T, spec: &QuantizerSpec<T>) -> T {
    spec.alpha * spec.alpha * noise_power + spec.alpha * spec.beta * (total_signal_power + noise_power)
}

/// Exact covariance of AQNM output:
/// `sum_l alpha^2 sigma_l^2 a(theta_l) a(theta_l)^H + noise_floor I_M`.
pub fn quantized_covariance<T: Real>(
    geometry: &ArrayGeometry<T>,
    sources: &SourceSet<T>,
    noise_power: T,
    spec: &QuantizerSpec<T>,
) -> Result<CMatrix<T>> {
    let m = geometry.elements();
    let floor = aqnm_noise_floor(sources.total_power(), noise_power, spec);
    let mut r = CMatrix::from_real_diagonal(&vec![floor; m]);
    for (&theta, &p) in sources.angles().iter().zip(sources.powers()) {
        let a = geometry.steering_vector(theta)?;
        let g = spec.alpha * spec.alpha * p;
        for j in 0..m {
            let aj = a[j].conj() * g;
            for (i, ai) in a.iter().enumerate() {
                r[(i, j)] += ai * aj;
            }
        }
    }
    Ok(r)
}

/// Measured `E|y - Q(y)|^2 / E|y|^2` over `samples` circular Gaussian draws
/// quantized at the analytic input scale.
pub fn empirical_distortion<T: Real>(codebook: &Codebook<T>, samples: usize, seed: u64) -> f64 {
    let mut rng = rng::seeded(seed);
    let power = T::lit(2.0);
    let scale = input_scale(power);
    let (mut err, mut sig) = (0.0, 0.0);
    for _ in 0..samples {
        let z: Complex<T> = rng::complex_normal(&mut rng, power);
        let q = Complex::new(
            codebook.quantize(z.re / scale) * scale,
            codebook.quantize(z.im / scale) * scale,
        );
        err += (z - q).norm_sqr().as_f64();
        sig += z.norm_sqr().as_f64();
    }
    err / sig
}
