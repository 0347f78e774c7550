use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lowres_doa::estimators::DEFAULT_GRID_STEP_DEG;
use lowres_doa::harness::{self, ExperimentConfig, QuantizerMode, SweepResult};
use lowres_doa::{Error, Result};

/// Low-resolution ADC direction-of-arrival experiments. Results are CSV on
/// stdout unless --out is given.
#[derive(Parser)]
#[command(name = "lowres-doa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Performance loss factor for each bit depth.
    LossVsBits(Common),
    /// Performance loss factor over an SNR grid.
    LossVsSnr(Common),
    /// Monte Carlo RMSE of Root-MUSIC / ESPRIT with the CRLB overlay.
    RmseVsSnr(Common),
    /// MUSIC pseudospectrum of a single realization.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Grid step in degrees.
        #[arg(long, default_value_t = DEFAULT_GRID_STEP_DEG)]
        grid_step: f64,
        /// Use the analytic quantized covariance instead of sampled data.
        #[arg(long)]
        exact_covariance: bool,
    },
    /// Square-root CRLB and loss factor per bit depth and SNR.
    CrlbTable(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated bit depths, `inf` for an ideal converter.
    #[arg(long, allow_hyphen_values = true)]
    bits: Option<String>,
    /// `start:step:stop` or a comma-separated list, in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Comma-separated subset of root_music, esprit.
    #[arg(long)]
    estimators: Option<String>,
    /// Simulate the converter by noise injection instead of quantizing.
    #[arg(long)]
    aqnm: bool,
    /// Center element positions on the array centroid.
    #[arg(long)]
    symmetric_array: bool,
    /// Worker threads for Monte Carlo trials; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        if let Some(bits) = &self.bits {
            cfg.bits = Some(harness::parse_bits(bits)?);
        }
        if let Some(snr) = &self.snr_db {
            cfg.snr_grid_db = Some(harness::parse_snr_grid(snr)?);
        }
        if let Some(est) = &self.estimators {
            cfg.estimators = harness::parse_estimators(est)?;
        }
        if self.aqnm {
            cfg.quantizer_mode = QuantizerMode::Aqnm;
        }
        if self.symmetric_array {
            cfg.symmetric_array = true;
        }
        if let Some(out) = &self.out {
            cfg.output = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(result: &SweepResult, cfg: &ExperimentConfig) -> Result<()> {
    match &cfg.output {
        Some(path) => harness::emit_csv(result, Some(cfg), path),
        None => write_stdout(|w| harness::write_csv(result, Some(cfg), w)),
    }
}

fn write_stdout(f: impl FnOnce(&mut io::StdoutLock) -> io::Result<()>) -> Result<()> {
    let mut lock = io::stdout().lock();
    f(&mut lock)
        .and_then(|_| lock.flush())
        .map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::LossVsBits(c) => {
            let cfg = c.resolve()?;
            emit(&harness::run_loss_factor_vs_bits(&cfg)?, &cfg)
        }
        Command::LossVsSnr(c) => {
            let cfg = c.resolve()?;
            emit(&harness::run_loss_factor_vs_snr(&cfg)?, &cfg)
        }
        Command::CrlbTable(c) => {
            let cfg = c.resolve()?;
            emit(&harness::crlb_table(&cfg)?, &cfg)
        }
        Command::RmseVsSnr(c) => {
            let cfg = c.resolve()?;
            let result = match c.threads {
                Some(n) => harness::run_rmse_vs_snr_threads(&cfg, n)?,
                None => harness::run_rmse_vs_snr(&cfg)?,
            };
            emit(&result, &cfg)
        }
        Command::Spectrum {
            common,
            grid_step,
            exact_covariance,
        } => {
            let cfg = common.resolve()?;
            let points = harness::spectrum(&cfg, grid_step, exact_covariance)?;
            match &cfg.output {
                Some(path) => {
                    let io_err = |source| Error::Io {
                        path: path.clone(),
                        source,
                    };
                    let file = std::fs::File::create(path).map_err(io_err)?;
                    harness::write_spectrum_csv(&points, Some(&cfg), io::BufWriter::new(file)).map_err(io_err)
                }
                None => write_stdout(|w| harness::write_spectrum_csv(&points, Some(&cfg), w)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
