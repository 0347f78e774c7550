//! CSV output of sweep results.
//!
//! Layout: optional `# `-prefixed config echo and `# note: ` lines, then the
//! header and one record per row. Floats use the shortest representation that
//! parses back to the same value; absent values are empty fields.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::{EstimatorKind, ExperimentConfig, SpectrumPoint, SweepResult, SweepRow};
use crate::error::{Error, Result};
use crate::quantizer::Resolution;

pub const CSV_HEADER: [&str; 8] = [
    "sweep_var",
    "b",
    "estimator",
    "rmse_deg",
    "crlb_sqrt_deg",
    "eta_db",
    "trials",
    "failures",
];

const NOTE_PREFIX: &str = "# note: ";

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn write_preamble<W: Write>(config: Option<&ExperimentConfig>, notes: &[String], w: &mut W) -> io::Result<()> {
    if let Some(cfg) = config {
        // The destination is not part of the experiment.
        let echoed = ExperimentConfig {
            output: None,
            ..cfg.clone()
        };
        for line in echoed.to_toml().lines() {
            writeln!(w, "# {line}")?;
        }
    }
    for note in notes {
        writeln!(w, "{NOTE_PREFIX}{note}")?;
    }
    Ok(())
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn into_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

/// Writes `result` to `w`, echoing `config` as comments when given.
pub fn write_csv<W: Write>(result: &SweepResult, config: Option<&ExperimentConfig>, mut w: W) -> io::Result<()> {
    write_preamble(config, &result.notes, &mut w)?;
    let mut out = csv_writer(w);
    out.write_record(CSV_HEADER).map_err(into_io)?;
    for r in &result.rows {
        out.write_record([
            r.sweep_var.to_string(),
            r.bits.to_string(),
            r.estimator.map(|e| e.as_str().to_string()).unwrap_or_default(),
            opt(r.rmse_deg),
            opt(r.crlb_sqrt_deg),
            opt(r.eta_db),
            r.trials.to_string(),
            r.failures.to_string(),
        ])
        .map_err(into_io)?;
    }
    out.flush()
}

/// Writes `result` to `path`.
pub fn emit_csv(result: &SweepResult, config: Option<&ExperimentConfig>, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    write_csv(result, config, &mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

/// Writes a pseudospectrum as `theta_deg,pseudospectrum` records.
pub fn write_spectrum_csv<W: Write>(points: &[SpectrumPoint], config: Option<&ExperimentConfig>, mut w: W) -> io::Result<()> {
    write_preamble(config, &[], &mut w)?;
    let mut out = csv_writer(w);
    out.write_record(["theta_deg", "pseudospectrum"]).map_err(into_io)?;
    for p in points {
        out.write_record([p.theta_deg.to_string(), p.value.to_string()]).map_err(into_io)?;
    }
    out.flush()
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("CSV line {line}: {msg}"))
}

/// Parses text produced by [`write_csv`]; the config echo is skipped.
pub fn parse_csv(text: &str) -> Result<SweepResult> {
    let notes = text
        .lines()
        .filter_map(|l| l.strip_prefix(NOTE_PREFIX))
        .map(str::to_string)
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(0, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(bad(0, format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| bad(0, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let float = |i: usize| -> Result<Option<f64>> {
            match &rec[i] {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|e| bad(line, e)),
            }
        };
        let count = |i: usize| -> Result<usize> { rec[i].parse().map_err(|e| bad(line, e)) };
        rows.push(SweepRow {
            sweep_var: float(0)?.ok_or_else(|| bad(line, "missing sweep_var"))?,
            bits: rec[1].parse::<Resolution>().map_err(|e| bad(line, e))?,
            estimator: match &rec[2] {
                "" => None,
                s => Some(s.parse::<EstimatorKind>().map_err(|e| bad(line, e))?),
            },
            rmse_deg: float(3)?,
            crlb_sqrt_deg: float(4)?,
            eta_db: float(5)?,
            trials: count(6)?,
            failures: count(7)?,
        });
    }
    Ok(SweepResult { rows, notes })
}

pub fn read_csv(path: &Path) -> Result<SweepResult> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text)
}
