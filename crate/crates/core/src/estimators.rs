//! Subspace DOA estimators: spectral MUSIC, Root-MUSIC and LS-ESPRIT.
//!
//! All three work from the eigendecomposition of the (sample) covariance.
//! The `*_subspace` variants take a precomputed [`SubspaceDecomposition`] so
//! several estimators can share one decomposition.

use num_complex::Complex;
use num_traits::Zero;

use crate::array_model::{check_angle, ArrayGeometry, SnapshotMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::polynomial;
use crate::scalar::Real;

/// `(1/N) sum_n y(n) y(n)^H`.
pub fn sample_covariance<T: Real>(y: &SnapshotMatrix<T>) -> CMatrix<T> {
    let n = T::lit(y.snapshots().max(1) as f64);
    y.data.gram_outer().scale(T::one() / n)
}

/// Signal / noise subspace split of a Hermitian covariance.
#[derive(Debug, Clone)]
pub struct SubspaceDecomposition<T> {
    /// `M x L`, eigenvectors of the `L` largest eigenvalues.
    pub signal_basis: CMatrix<T>,
    /// `M x (M - L)`, the remaining eigenvectors.
    pub noise_basis: CMatrix<T>,
    /// All `M` eigenvalues, descending.
    pub eigenvalues: Vec<T>,
    /// The `L`-th and `(L+1)`-th eigenvalues coincide to working precision,
    /// so the split is arbitrary.
    pub degenerate: bool,
}

impl<T: Real> SubspaceDecomposition<T> {
    pub fn sources(&self) -> usize {
        self.signal_basis.cols()
    }

    pub fn elements(&self) -> usize {
        self.signal_basis.rows()
    }
}

/// Eigendecomposition sorted by descending eigenvalue, split after `sources`.
///
/// With fewer snapshots than elements the sample covariance is rank
/// deficient; its null space simply joins the noise subspace.
pub fn decompose<T: Real>(r: &CMatrix<T>, sources: usize) -> Result<SubspaceDecomposition<T>> {
    let m = r.rows();
    if !r.is_square() {
        return Err(Error::invalid("covariance must be square"));
    }
    if sources == 0 || sources >= m {
        return Err(Error::invalid(format!("need 1 <= L < M, got L = {sources}, M = {m}")));
    }
    let eig = linalg::hermitian_eigen(r)?;
    let eigenvalues: Vec<T> = eig.values.iter().rev().copied().collect();
    let mut ordered = CMatrix::zeros(m, m);
    for k in 0..m {
        ordered.column_mut(k).copy_from_slice(eig.vectors.column(m - 1 - k));
    }
    let top = eigenvalues[0].abs().max(T::min_positive_value());
    let gap = eigenvalues[sources - 1] - eigenvalues[sources];
    let degenerate = gap <= T::lit(16.0 * m as f64) * T::epsilon() * top;
    Ok(SubspaceDecomposition {
        signal_basis: ordered.columns(0, sources),
        noise_basis: ordered.columns(sources, m),
        eigenvalues,
        degenerate,
    })
}

/// Which estimator produced a [`DoaEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Music,
    RootMusic,
    Esprit,
}

/// Estimated angles with per-method diagnostics.
#[derive(Debug, Clone)]
pub struct DoaEstimate<T> {
    /// Radians, ascending.
    pub angles: Vec<T>,
    pub method: Method,
    /// Selected polynomial roots (Root-MUSIC), rotation eigenvalues (ESPRIT)
    /// or peak values (MUSIC), ordered like `angles`.
    pub selected: Vec<Complex<T>>,
    /// A phase mapped outside `[-1, 1]` in sine space and was clamped to endfire.
    pub clamped: bool,
    /// The subspace split was degenerate; the angles are not meaningful.
    pub degenerate: bool,
}

/// `‖U_N^H a(θ)‖^{-2}` at each grid angle.
pub fn music_pseudospectrum<T: Real>(
    decomp: &SubspaceDecomposition<T>,
    geometry: &ArrayGeometry<T>,
    grid: &[T],
) -> Result<Vec<T>> {
    let un = &decomp.noise_basis;
    if un.cols() == 0 {
        return Err(Error::invalid("noise subspace is empty"));
    }
    if un.rows() != geometry.elements() {
        return Err(Error::invalid("decomposition does not match the array size"));
    }
    grid.iter()
        .map(|&theta| {
            let a = geometry.steering_vector(theta)?;
            let proj: T = (0..un.cols()).map(|k| linalg::dot_conj(un.column(k), &a).norm_sqr()).sum();
            Ok(if proj > T::zero() { T::one() / proj } else { T::infinity() })
        })
        .collect()
}

/// Uniform angle grid strictly inside (-90°, 90°) with step `step_deg`, in radians.
pub fn angle_grid<T: Real>(step_deg: f64) -> Result<Vec<T>> {
    if !(step_deg > 0.0 && step_deg < 90.0) {
        return Err(Error::invalid("grid step must lie in (0, 90) degrees"));
    }
    let half = (90.0 / step_deg).ceil() as i64 - 1;
    Ok((-half..=half).map(|k| T::lit((k as f64 * step_deg).to_radians())).collect())
}

/// Default spectral grid step in degrees.
pub const DEFAULT_GRID_STEP_DEG: f64 = 0.01;

/// Spectral MUSIC: the `L` highest local maxima of the pseudospectrum on `grid`.
pub fn music_subspace<T: Real>(
    decomp: &SubspaceDecomposition<T>,
    geometry: &ArrayGeometry<T>,
    grid: &[T],
) -> Result<DoaEstimate<T>> {
    let spectrum = music_pseudospectrum(decomp, geometry, grid)?;
    let mut peaks: Vec<usize> = (0..spectrum.len())
        .filter(|&i| {
            let left = i == 0 || spectrum[i] >= spectrum[i - 1];
            let right = i + 1 == spectrum.len() || spectrum[i] > spectrum[i + 1];
            left && right
        })
        .collect();
    let l = decomp.sources();
    if peaks.len() < l {
        return Err(Error::EstimationFailure(format!("found {} spectral peaks, need {l}", peaks.len())));
    }
    peaks.sort_by(|&a, &b| spectrum[b].partial_cmp(&spectrum[a]).unwrap_or(std::cmp::Ordering::Equal));
    peaks.truncate(l);
    peaks.sort_unstable();
    Ok(DoaEstimate {
        angles: peaks.iter().map(|&i| grid[i]).collect(),
        method: Method::Music,
        selected: peaks.iter().map(|&i| Complex::new(spectrum[i], T::zero())).collect(),
        clamped: false,
        degenerate: decomp.degenerate,
    })
}

/// Ascending coefficients of `z^{M-1} p(1/z)^T U_N U_N^H p(z)`: coefficient
/// `M - 1 + k` is the sum of the `k`-th diagonal of `U_N U_N^H`
/// (`k > 0` above the main diagonal).
pub fn rooting_polynomial<T: Real>(noise_basis: &CMatrix<T>) -> Vec<Complex<T>> {
    let c = noise_basis.gram_outer();
    let m = c.rows();
    let mut coeffs = vec![Complex::zero(); 2 * m - 1];
    for j in 0..m {
        for i in 0..m {
            // k = j - i
            coeffs[m - 1 + j - i] += c[(i, j)];
        }
    }
    coeffs
}

/// Maps a phase `2π d sin θ` back to θ, clamping out-of-range sines.
fn phase_to_angle<T: Real>(phase: T, spacing: T) -> (T, bool) {
    let s = phase / (T::TAU() * spacing);
    if s.abs() > T::one() {
        (s.signum().asin(), true)
    } else {
        (s.asin(), false)
    }
}

fn sorted_estimate<T: Real>(mut pairs: Vec<(T, Complex<T>)>, method: Method, clamped: bool, degenerate: bool) -> DoaEstimate<T> {
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    DoaEstimate {
        angles: pairs.iter().map(|p| p.0).collect(),
        selected: pairs.iter().map(|p| p.1).collect(),
        method,
        clamped,
        degenerate,
    }
}

fn check_uniform<T: Real>(geometry: &ArrayGeometry<T>) -> Result<()> {
    if geometry.spacing() > T::lit(0.5) * geometry.wavelength() {
        return Err(Error::invalid("spacing above half a wavelength makes the angle mapping ambiguous"));
    }
    Ok(())
}

/// Root-MUSIC from a covariance matrix.
pub fn root_music<T: Real>(r: &CMatrix<T>, sources: usize, geometry: &ArrayGeometry<T>) -> Result<DoaEstimate<T>> {
    root_music_subspace(&decompose(r, sources)?, geometry)
}

/// Root-MUSIC: of the roots strictly inside the unit circle, keep the `L`
/// with largest modulus and map `arg z` to angle.
pub fn root_music_subspace<T: Real>(
    decomp: &SubspaceDecomposition<T>,
    geometry: &ArrayGeometry<T>,
) -> Result<DoaEstimate<T>> {
    check_uniform(geometry)?;
    if decomp.elements() != geometry.elements() {
        return Err(Error::invalid("decomposition does not match the array size"));
    }
    let coeffs = rooting_polynomial(&decomp.noise_basis);
    let mut inside: Vec<Complex<T>> = polynomial::roots(&coeffs)?
        .into_iter()
        .filter(|z| z.norm() < T::one())
        .collect();
    let l = decomp.sources();
    if inside.len() < l {
        return Err(Error::EstimationFailure(format!(
            "{} roots inside the unit circle, need {l}",
            inside.len()
        )));
    }
    inside.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap_or(std::cmp::Ordering::Equal));
    inside.truncate(l);
    let mut clamped = false;
    let pairs = inside
        .into_iter()
        .map(|z| {
            let (theta, c) = phase_to_angle(z.arg(), geometry.spacing());
            clamped |= c;
            (theta, z)
        })
        .collect();
    Ok(sorted_estimate(pairs, Method::RootMusic, clamped, decomp.degenerate))
}

/// LS-ESPRIT from a covariance matrix.
pub fn esprit<T: Real>(r: &CMatrix<T>, sources: usize, geometry: &ArrayGeometry<T>) -> Result<DoaEstimate<T>> {
    if sources + 1 >= r.rows() {
        return Err(Error::invalid("ESPRIT needs L < M - 1"));
    }
    esprit_subspace(&decompose(r, sources)?, geometry)
}

/// Least-squares ESPRIT with maximally overlapping subarrays (shift of one
/// element): solves `U_1 Ψ = U_2` for the first / last `M - 1` rows of the
/// signal basis and maps the eigenvalue phases of `Ψ` to angles.
pub fn esprit_subspace<T: Real>(
    decomp: &SubspaceDecomposition<T>,
    geometry: &ArrayGeometry<T>,
) -> Result<DoaEstimate<T>> {
    check_uniform(geometry)?;
    let m = decomp.elements();
    let l = decomp.sources();
    if l + 1 >= m {
        return Err(Error::invalid("ESPRIT needs L < M - 1"));
    }
    if m != geometry.elements() {
        return Err(Error::invalid("decomposition does not match the array size"));
    }
    let us = &decomp.signal_basis;
    let u1 = us.row_range(0, m - 1);
    let u2 = us.row_range(1, m);
    let psi = linalg::solve(&u1.adjoint_mul(&u1), &u1.adjoint_mul(&u2))
        .map_err(|_| Error::EstimationFailure("subarray signal basis is rank deficient".into()))?;
    let rotations = linalg::eigenvalues(&psi)?;
    let mut clamped = false;
    let pairs = rotations
        .into_iter()
        .map(|z| {
            let (theta, c) = phase_to_angle(z.arg(), geometry.spacing());
            clamped |= c;
            (theta, z)
        })
        .collect();
    Ok(sorted_estimate(pairs, Method::Esprit, clamped, decomp.degenerate))
}

/// Checks that an estimate respects the open angle interval.
pub fn validate_estimate<T: Real>(est: &DoaEstimate<T>) -> Result<()> {
    est.angles.iter().try_for_each(|&a| check_angle(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array_model::{generate_snapshots, SnapshotKind, SourceSet};
    use crate::quantizer::{aqnm_noise_floor, quantized_covariance, QuantizerSpec, Resolution};

    fn deg(x: f64) -> f64 {
        x.to_radians()
    }

    fn exact_cov(m: usize, theta: f64, res: Resolution) -> (ArrayGeometry<f64>, CMatrix<f64>) {
        let g = ArrayGeometry::half_wavelength(m).unwrap();
        let s = SourceSet::single(theta, 1.0).unwrap();
        let r = quantized_covariance(&g, &s, 1.0, &QuantizerSpec::new(res).unwrap()).unwrap();
        (g, r)
    }

    #[test]
    fn single_snapshot_covariance_is_rank_one() {
        let y = SnapshotMatrix {
            data: CMatrix::from_fn(3, 1, |i, _| Complex::new(i as f64, 1.0)),
            kind: SnapshotKind::Unquantized,
        };
        let r = sample_covariance(&y);
        // (2 + i)(1 - i)
        assert_eq!(r[(2, 1)], Complex::new(3.0, -1.0));
        let eig = linalg::hermitian_eigen(&r).unwrap();
        assert!(eig.values[..2].iter().all(|v| v.abs() < 1e-12));
        let zero = SnapshotMatrix {
            data: CMatrix::<f64>::zeros(3, 4),
            kind: SnapshotKind::Unquantized,
        };
        assert_eq!(sample_covariance(&zero), CMatrix::zeros(3, 3));
    }

    #[test]
    fn exact_covariance_eigenstructure() {
        let (_, r) = exact_cov(8, deg(15.0), Resolution::Bits(2));
        let spec = QuantizerSpec::<f64>::bits(2).unwrap();
        let floor = aqnm_noise_floor(1.0, 1.0, &spec);
        let d = decompose(&r, 1).unwrap();
        assert!((d.eigenvalues[0] - (spec.alpha * spec.alpha * 8.0 + floor)).abs() < 1e-10);
        assert!(d.eigenvalues[1..].iter().all(|&v| (v - floor).abs() < 1e-10));
        assert!(!d.degenerate);
        // U_S spans a(θ)
        let g = ArrayGeometry::<f64>::half_wavelength(8).unwrap();
        let a = g.steering_vector(deg(15.0)).unwrap();
        let overlap = linalg::dot_conj(d.signal_basis.column(0), &a).norm() / 8f64.sqrt();
        assert!((1.0 - overlap).abs() < 1e-12);
    }

    #[test]
    fn decompose_identity_flags_tie() {
        let d = decompose(&CMatrix::<f64>::identity(5), 2).unwrap();
        assert!(d.eigenvalues.iter().all(|&v| (v - 1.0).abs() < 1e-14));
        assert!(d.degenerate);
        assert!(decompose(&CMatrix::<f64>::identity(5), 5).is_err());
        assert!(decompose(&CMatrix::<f64>::identity(5), 0).is_err());
    }

    #[test]
    fn pseudospectrum_peaks_at_source() {
        let (g, r) = exact_cov(8, deg(15.0), Resolution::Bits(3));
        let d = decompose(&r, 1).unwrap();
        let grid: Vec<f64> = (-8999..=8999).map(|k| deg(k as f64 * 0.01)).collect();
        let s = music_pseudospectrum(&d, &g, &grid).unwrap();
        assert!(s.iter().all(|&v| v > 0.0));
        let best = (0..s.len()).max_by(|&a, &b| s[a].partial_cmp(&s[b]).unwrap()).unwrap();
        assert!((grid[best] - deg(15.0)).abs() < deg(0.005));
        let scaled = decompose(&r.scale(4.0), 1).unwrap();
        assert_eq!(music_pseudospectrum(&scaled, &g, &grid).unwrap(), s);
        let est = music_subspace(&d, &g, &grid).unwrap();
        assert_eq!(est.method, Method::Music);
        assert!((est.angles[0] - deg(15.0)).abs() < deg(0.005));
    }

    #[test]
    fn angle_grid_is_open_interval() {
        let g = angle_grid::<f64>(0.01).unwrap();
        assert_eq!(g.len(), 17999);
        assert!(g.iter().all(|&t| t.abs() < std::f64::consts::FRAC_PI_2));
        assert!(angle_grid::<f64>(0.0).is_err());
    }

    #[test]
    fn root_music_exact_covariance() {
        for res in [Resolution::Bits(1), Resolution::Bits(3), Resolution::Infinite] {
            let (g, r) = exact_cov(16, deg(15.0), res);
            let est = root_music(&r, 1, &g).unwrap();
            assert!((est.angles[0] - deg(15.0)).abs() < 1e-6, "{res}");
            assert!(!est.clamped);
        }
        let (g, r) = exact_cov(16, 0.0, Resolution::Bits(2));
        assert!(root_music(&r, 1, &g).unwrap().angles[0].abs() < 1e-6);
    }

    #[test]
    fn esprit_exact_covariance() {
        for res in [Resolution::Bits(1), Resolution::Bits(3), Resolution::Infinite] {
            let (g, r) = exact_cov(16, deg(15.0), res);
            let est = esprit(&r, 1, &g).unwrap();
            assert!((est.angles[0] - deg(15.0)).abs() < 1e-6);
            assert!((est.selected[0].norm() - 1.0).abs() < 1e-9);
        }
        let (g, r) = exact_cov(16, 0.0, Resolution::Bits(2));
        assert!(esprit(&r, 1, &g).unwrap().angles[0].abs() < 1e-9);
        let (g2, r2) = exact_cov(2, 0.1, Resolution::Infinite);
        assert!(esprit(&r2, 1, &g2).is_err());
    }

    #[test]
    fn two_sources_resolved() {
        let g = ArrayGeometry::<f64>::half_wavelength(10).unwrap();
        let s = SourceSet::new(vec![deg(-20.0), deg(30.0)], vec![1.0, 2.0]).unwrap();
        let r = quantized_covariance(&g, &s, 0.5, &QuantizerSpec::bits(2).unwrap()).unwrap();
        for est in [root_music(&r, 2, &g).unwrap(), esprit(&r, 2, &g).unwrap()] {
            assert!((est.angles[0] - deg(-20.0)).abs() < 1e-6);
            assert!((est.angles[1] - deg(30.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn root_music_rejects_wide_spacing() {
        let g = ArrayGeometry::<f64>::new(6, 0.7, Default::default()).unwrap();
        assert!(root_music(&CMatrix::identity(6), 1, &g).is_err());
    }

    #[test]
    fn sample_data_estimates_near_truth() {
        let g = ArrayGeometry::<f64>::half_wavelength(12).unwrap();
        let s = SourceSet::single(deg(-25.0), 1.0).unwrap();
        let y = generate_snapshots(&g, &s, 0.1, 200, 3).unwrap();
        let r = sample_covariance(&y);
        let est = root_music(&r, 1, &g).unwrap();
        assert!((est.angles[0] - deg(-25.0)).abs() < deg(0.2));
        validate_estimate(&est).unwrap();
    }

    #[test]
    fn phase_clamping_is_flagged() {
        let (t, c) = phase_to_angle(3.0f64, 0.45);
        assert!(c);
        assert_eq!(t, std::f64::consts::FRAC_PI_2);
        let (_, c) = phase_to_angle(1.0f64, 0.5);
        assert!(!c);
    }
}
