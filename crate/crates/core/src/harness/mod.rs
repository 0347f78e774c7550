//! Seeded Monte Carlo sweeps and analytic loss/bound tables.
//!
//! Every sweep yields a [`SweepResult`] whose `sweep_var` column is the input
//! SNR in dB. Monte Carlo rows are pure functions of `(config, seed)`: trial
//! `t` draws from `rng::trial_stream(seed, t)` for every `(γ, b)` cell, so the
//! cells share common random numbers and the thread count never matters.

pub mod config;
mod csv_io;

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::array_model::{generate_snapshots_with, SnapshotMatrix, SourceSet};
use crate::crlb::{db_to_linear, performance_loss_db, OperatingPoint};
use crate::error::{Error, Result};
use crate::estimators::{
    angle_grid, decompose, esprit_subspace, music_pseudospectrum, root_music_subspace, sample_covariance,
};
use crate::quantizer::{
    aqnm_transform_with, design_lloyd_max, input_scale, quantize_snapshots, quantized_covariance, Codebook, QuantizerSpec,
    Resolution,
};
use crate::rng;

pub use config::{parse_bits, parse_estimators, parse_snr_grid, EstimatorKind, ExperimentConfig, QuantizerMode};
pub use csv_io::{emit_csv, parse_csv, read_csv, write_csv, write_spectrum_csv, CSV_HEADER};

/// Bit depths swept by `loss-vs-bits` when none are configured.
pub fn default_bits_loss_vs_bits() -> Vec<Resolution> {
    (1..=10).map(Resolution::Bits).chain([Resolution::Infinite]).collect()
}

pub const DEFAULT_SNR_LOSS_VS_BITS: [f64; 5] = [-20.0, -10.0, 0.0, 10.0, 20.0];

pub fn default_bits_loss_vs_snr() -> Vec<Resolution> {
    (1..=5).map(Resolution::Bits).collect()
}

/// `-20:2:20` dB.
pub fn default_snr_loss_vs_snr() -> Vec<f64> {
    (-10..=10).map(|k| 2.0 * k as f64).collect()
}

pub const DEFAULT_BITS_RMSE: [Resolution; 2] = [Resolution::Bits(2), Resolution::Bits(3)];

/// `-10:5:20` dB, shared by `rmse-vs-snr` and `crlb-table`.
pub const DEFAULT_SNR_RMSE: [f64; 7] = [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0];

pub fn default_bits_crlb_table() -> Vec<Resolution> {
    (1..=5).map(Resolution::Bits).chain([Resolution::Infinite]).collect()
}

/// Tolerance of the Lloyd-Max design used by the true quantizer.
pub const CODEBOOK_TOLERANCE: f64 = 1e-10;

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Input SNR in dB.
    pub sweep_var: f64,
    pub bits: Resolution,
    /// `None` on analytic rows.
    pub estimator: Option<EstimatorKind>,
    /// `None` when analytic or when every trial failed.
    pub rmse_deg: Option<f64>,
    pub crlb_sqrt_deg: Option<f64>,
    pub eta_db: Option<f64>,
    pub trials: usize,
    pub failures: usize,
}

impl SweepRow {
    fn key(&self) -> (f64, Resolution, Option<EstimatorKind>) {
        (self.sweep_var, self.bits, self.estimator)
    }
}

fn row_order(a: &SweepRow, b: &SweepRow) -> Ordering {
    let (x, y) = (a.key(), b.key());
    x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    /// Sorted by `(sweep_var, bits, estimator)`.
    pub rows: Vec<SweepRow>,
    pub notes: Vec<String>,
}

impl SweepResult {
    pub fn new(mut rows: Vec<SweepRow>, notes: Vec<String>) -> Self {
        rows.sort_by(row_order);
        Self { rows, notes }
    }

    pub fn row(&self, snr_db: f64, bits: Resolution, estimator: Option<EstimatorKind>) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.key() == (snr_db, bits, estimator))
    }
}

/// Root mean squared error of `estimates` about `truth` (radians in), in degrees.
pub fn rmse(estimates: &[f64], truth: f64) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::invalid("RMSE of an empty estimate list"));
    }
    let mse = estimates.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / estimates.len() as f64;
    Ok(mse.sqrt().to_degrees())
}

/// `√CRLB_b` in degrees and `η_b` in dB at `snr_db`.
fn analytic_columns(config: &ExperimentConfig, bits: Resolution, snr_db: f64) -> Result<(f64, f64)> {
    let ps = config.signal_power;
    let pw = ps / db_to_linear(snr_db);
    let point = OperatingPoint::new(
        config.geometry()?,
        config.theta_rad(),
        ps,
        pw,
        config.snapshots,
        QuantizerSpec::new(bits)?,
    )?;
    let eta = performance_loss_db(bits, db_to_linear(snr_db))?;
    Ok((point.crlb().sqrt().to_degrees(), eta))
}

fn analytic_sweep(config: &ExperimentConfig, bits: &[Resolution], snr_db: &[f64]) -> Result<SweepResult> {
    config.validate()?;
    let mut rows = Vec::with_capacity(bits.len() * snr_db.len());
    for &b in bits {
        for &g in snr_db {
            let (crlb, eta) = analytic_columns(config, b, g)?;
            rows.push(SweepRow {
                sweep_var: g,
                bits: b,
                estimator: None,
                rmse_deg: None,
                crlb_sqrt_deg: Some(crlb),
                eta_db: Some(eta),
                trials: 0,
                failures: 0,
            });
        }
    }
    let mut notes = Vec::new();
    let one_bit_low = rows
        .iter()
        .filter(|r| r.bits == Resolution::Bits(1))
        .filter_map(|r| r.eta_db)
        .fold(f64::INFINITY, f64::min);
    if one_bit_low < 2.0 {
        notes.push(format!(
            "1-bit loss reaches {one_bit_low:.4} dB on this grid; its floor as SNR -> 0 is 1.9613 dB, just under 2 dB"
        ));
    }
    Ok(SweepResult::new(rows, notes))
}

/// Loss factor `η_b(γ)` for every configured bit depth and SNR (bits 1..10 and
/// ∞ over -20..20 dB in steps of 10 by default).
pub fn run_loss_factor_vs_bits(config: &ExperimentConfig) -> Result<SweepResult> {
    analytic_sweep(
        config,
        &config.bits_or(&default_bits_loss_vs_bits()),
        &config.snr_or(&DEFAULT_SNR_LOSS_VS_BITS),
    )
}

/// Loss factor over an SNR grid (bits 1..5 over -20:2:20 dB by default).
pub fn run_loss_factor_vs_snr(config: &ExperimentConfig) -> Result<SweepResult> {
    analytic_sweep(
        config,
        &config.bits_or(&default_bits_loss_vs_snr()),
        &config.snr_or(&default_snr_loss_vs_snr()),
    )
}

/// `√CRLB_b` and `η_b` table (bits 1..5 and ∞ over -10:5:20 dB by default).
pub fn crlb_table(config: &ExperimentConfig) -> Result<SweepResult> {
    analytic_sweep(
        config,
        &config.bits_or(&default_bits_crlb_table()),
        &config.snr_or(&DEFAULT_SNR_RMSE),
    )
}

/// Per-cell converter, built once per sweep.
enum Adc {
    Ideal,
    Lloyd(Codebook<f64>),
    Aqnm(QuantizerSpec<f64>),
}

impl Adc {
    fn new(bits: Resolution, mode: QuantizerMode) -> Result<Self> {
        Ok(match (bits, mode) {
            (Resolution::Infinite, _) => Adc::Ideal,
            (Resolution::Bits(b), QuantizerMode::TrueQuantizer) => Adc::Lloyd(design_lloyd_max(b, CODEBOOK_TOLERANCE)?),
            (r, QuantizerMode::Aqnm) => Adc::Aqnm(QuantizerSpec::new(r)?),
        })
    }
}

/// Snapshots of trial `trial` at `noise_power` after the converter.
fn observe(config: &ExperimentConfig, adc: &Adc, noise_power: f64, trial: u64) -> Result<SnapshotMatrix<f64>> {
    let geometry = config.geometry()?;
    let sources = SourceSet::single(config.theta_rad(), config.signal_power)?;
    let mut rng = rng::trial_stream(config.seed, trial);
    let (y, _) = generate_snapshots_with(&geometry, &sources, noise_power, config.snapshots, &mut rng)?;
    let total = config.signal_power + noise_power;
    match adc {
        Adc::Ideal => Ok(y),
        Adc::Lloyd(cb) => quantize_snapshots(&y, cb, input_scale(total)),
        Adc::Aqnm(spec) => aqnm_transform_with(&y, spec, total, &mut rng),
    }
}

/// Estimated angle per configured estimator for one trial; `None` marks a
/// failure.
fn run_trial(config: &ExperimentConfig, adc: &Adc, noise_power: f64, trial: u64) -> Result<Vec<Option<f64>>> {
    let geometry = config.geometry()?;
    let r = sample_covariance(&observe(config, adc, noise_power, trial)?);
    let Ok(decomp) = decompose(&r, 1) else {
        return Ok(vec![None; config.estimators.len()]);
    };
    Ok(config
        .estimators
        .iter()
        .map(|kind| {
            let est = match kind {
                EstimatorKind::RootMusic => root_music_subspace(&decomp, &geometry),
                EstimatorKind::Esprit => esprit_subspace(&decomp, &geometry),
            };
            est.ok()
                .filter(|e| !e.degenerate)
                .and_then(|e| e.angles.first().copied())
                .filter(|a| a.is_finite())
        })
        .collect())
}

/// Monte Carlo RMSE of each estimator against `√CRLB_b` (bits 2 and 3 over
/// -10:5:20 dB by default), on the global rayon pool.
pub fn run_rmse_vs_snr(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    if config.estimators.is_empty() {
        return Err(Error::Config("at least one estimator is required".into()));
    }
    let bits = config.bits_or(&DEFAULT_BITS_RMSE);
    let snr = config.snr_or(&DEFAULT_SNR_RMSE);
    let mut rows = Vec::new();
    for &b in &bits {
        let adc = Adc::new(b, config.quantizer_mode)?;
        for &g in &snr {
            let noise_power = config.signal_power / db_to_linear(g);
            // Indexed collect keeps trial order regardless of scheduling.
            let per_trial: Vec<Vec<Option<f64>>> = (0..config.trials as u64)
                .into_par_iter()
                .map(|t| run_trial(config, &adc, noise_power, t))
                .collect::<Result<_>>()?;
            let (crlb, eta) = analytic_columns(config, b, g)?;
            for (k, &kind) in config.estimators.iter().enumerate() {
                let ok: Vec<f64> = per_trial.iter().filter_map(|v| v[k]).collect();
                rows.push(SweepRow {
                    sweep_var: g,
                    bits: b,
                    estimator: Some(kind),
                    rmse_deg: rmse(&ok, config.theta_rad()).ok(),
                    crlb_sqrt_deg: Some(crlb),
                    eta_db: Some(eta),
                    trials: config.trials,
                    failures: config.trials - ok.len(),
                });
            }
        }
    }
    let mut notes = Vec::new();
    if rows.iter().any(|r| r.failures > 0) {
        notes.push("failed trials are excluded from rmse_deg and counted in failures".to_string());
    }
    Ok(SweepResult::new(rows, notes))
}

/// [`run_rmse_vs_snr`] on a dedicated pool of `threads` workers.
pub fn run_rmse_vs_snr_threads(config: &ExperimentConfig, threads: usize) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_rmse_vs_snr(config))
}

/// MUSIC pseudospectrum sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint {
    pub theta_deg: f64,
    pub value: f64,
}

/// Pseudospectrum of trial 0 at the first configured SNR (10 dB if unset) and
/// bit depth (ideal if unset). With `exact` the analytic quantized covariance
/// replaces the sample covariance.
pub fn spectrum(config: &ExperimentConfig, grid_step_deg: f64, exact: bool) -> Result<Vec<SpectrumPoint>> {
    config.validate()?;
    let bits = config.bits_or(&[Resolution::Infinite])[0];
    let snr_db = config.snr_or(&[10.0])[0];
    let geometry = config.geometry()?;
    let noise_power = config.signal_power / db_to_linear(snr_db);
    let r = if exact {
        let sources = SourceSet::single(config.theta_rad(), config.signal_power)?;
        quantized_covariance(&geometry, &sources, noise_power, &QuantizerSpec::new(bits)?)?
    } else {
        let adc = Adc::new(bits, config.quantizer_mode)?;
        sample_covariance(&observe(config, &adc, noise_power, 0)?)
    };
    let decomp = decompose(&r, 1)?;
    let grid: Vec<f64> = angle_grid(grid_step_deg)?;
    let values = music_pseudospectrum(&decomp, &geometry, &grid)?;
    Ok(grid
        .into_iter()
        .zip(values)
        .map(|(t, value)| SpectrumPoint {
            // Grid points are integer multiples of the step.
            theta_deg: (t.to_degrees() / grid_step_deg).round() * grid_step_deg,
            value,
        })
        .collect())
}
