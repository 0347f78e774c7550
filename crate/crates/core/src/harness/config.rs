//! Experiment configuration and its on-disk form.
//!
//! The file format is flat TOML: one `key = value` line per field, using the
//! field names below. Defaults reproduce the reference scenario (θ = 15°,
//! M = 128, half-wavelength spacing, N = 32, 8000 trials).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::array_model::{ArrayGeometry, PositionConvention};
use crate::error::{Error, Result};
use crate::quantizer::Resolution;

/// DOA estimators the sweeps can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    RootMusic,
    Esprit,
}

impl EstimatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::RootMusic => "root_music",
            EstimatorKind::Esprit => "esprit",
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "root_music" | "root-music" | "rootmusic" => Ok(EstimatorKind::RootMusic),
            "esprit" => Ok(EstimatorKind::Esprit),
            other => Err(Error::Config(format!("unknown estimator {other:?}"))),
        }
    }
}

/// How the ADC is simulated in Monte Carlo sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantizerMode {
    /// Componentwise Lloyd-Max quantizer with ideal gain control.
    #[default]
    TrueQuantizer,
    /// Linear gain plus Gaussian noise injection.
    Aqnm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Source angle in degrees.
    pub theta_deg: f64,
    #[serde(rename = "M")]
    pub elements: usize,
    pub d_in_wavelengths: f64,
    #[serde(rename = "N")]
    pub snapshots: usize,
    pub trials: usize,
    #[serde(serialize_with = "ser_seed", deserialize_with = "de_seed")]
    pub seed: u64,
    /// Source power; the noise power follows from the SNR.
    pub signal_power: f64,
    /// `None` selects the default for the sweep being run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits: Option<Vec<Resolution>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_grid_db: Option<Vec<f64>>,
    pub estimators: Vec<EstimatorKind>,
    pub quantizer_mode: QuantizerMode,
    /// Element positions centered on the array centroid instead of `(m - M/2) d`.
    pub symmetric_array: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            theta_deg: 15.0,
            elements: 128,
            d_in_wavelengths: 0.5,
            snapshots: 32,
            trials: 8000,
            seed: 1,
            signal_power: 1.0,
            bits: None,
            snr_grid_db: None,
            estimators: vec![EstimatorKind::RootMusic, EstimatorKind::Esprit],
            quantizer_mode: QuantizerMode::TrueQuantizer,
            symmetric_array: false,
            output: None,
        }
    }
}

// TOML integers are signed; seeds above i64::MAX travel as strings.
fn ser_seed<S: Serializer>(seed: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(*seed) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&seed.to_string()),
    }
}

fn de_seed<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(v) => u64::try_from(v).map_err(serde::de::Error::custom),
        Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.theta_deg.abs() < 90.0) {
            return bad("theta_deg must lie strictly between -90 and 90");
        }
        if self.elements < 3 {
            return bad("M must be at least 3");
        }
        if !(self.d_in_wavelengths > 0.0 && self.d_in_wavelengths <= 0.5) {
            return bad("d_in_wavelengths must lie in (0, 0.5]");
        }
        if self.snapshots == 0 {
            return bad("N must be at least 1");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if !(self.signal_power > 0.0 && self.signal_power.is_finite()) {
            return bad("signal_power must be positive");
        }
        if let Some(bits) = &self.bits {
            if bits.is_empty() || bits.contains(&Resolution::Bits(0)) {
                return bad("bits must be a non-empty list of depths >= 1 or \"inf\"");
            }
        }
        if let Some(grid) = &self.snr_grid_db {
            if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) {
                return bad("snr_grid_db must be a non-empty list of finite values");
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<ArrayGeometry<f64>> {
        let convention = if self.symmetric_array {
            PositionConvention::Centered
        } else {
            PositionConvention::HalfApertureOffset
        };
        ArrayGeometry::new(self.elements, self.d_in_wavelengths, convention)
    }

    pub fn theta_rad(&self) -> f64 {
        self.theta_deg.to_radians()
    }

    pub fn bits_or(&self, default: &[Resolution]) -> Vec<Resolution> {
        let mut b = self.bits.clone().unwrap_or_else(|| default.to_vec());
        b.sort();
        b.dedup();
        b
    }

    pub fn snr_or(&self, default: &[f64]) -> Vec<f64> {
        let mut g = self.snr_grid_db.clone().unwrap_or_else(|| default.to_vec());
        g.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
        g.dedup();
        g
    }
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list of dB values.
pub fn parse_snr_grid(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad SNR value {s:?}")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if !(step > 0.0) || stop < start {
                return Err(Error::Config(format!("bad SNR range {text:?}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|k| start + k as f64 * step).collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(Error::Config(format!("bad SNR grid {text:?}"))),
    }
}

/// Parses a comma-separated bit list such as `1,2,3,inf`.
pub fn parse_bits(text: &str) -> Result<Vec<Resolution>> {
    text.split(',').map(str::parse).collect()
}

pub fn parse_estimators(text: &str) -> Result<Vec<EstimatorKind>> {
    text.split(',').map(str::parse).collect()
}
