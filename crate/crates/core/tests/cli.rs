use std::process::{Command, Output};

use lowres_doa::harness::{parse_csv, CSV_HEADER};
use lowres_doa::Resolution;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowres-doa")).args(args).output().expect("spawn CLI")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn loss_vs_bits_defaults() {
    let o = cli(&["loss-vs-bits"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "# trials = 8000"));
    let res = parse_csv(&text).unwrap();
    assert_eq!(res.rows.len(), 55);
    assert!(res.rows.iter().filter(|r| r.bits == Resolution::Infinite).all(|r| r.eta_db == Some(0.0)));
}

#[test]
fn loss_vs_snr_flags_override_and_note() {
    let o = cli(&["loss-vs-snr", "--bits", "1,2", "--snr-db", "-20:5:20"]);
    assert!(o.status.success());
    let res = parse_csv(&stdout(&o)).unwrap();
    assert_eq!(res.rows.len(), 2 * 9);
    assert_eq!(res.notes.len(), 1);
}

#[test]
fn crlb_table_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let o = cli(&["crlb-table", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == CSV_HEADER.join(",")));
    let res = parse_csv(&text).unwrap();
    let ideal = res.row(0.0, Resolution::Infinite, None).unwrap();
    // 1 / (2 * 32 * (2π)^2 cos^2(15°) * 43696), in degrees after the square root
    assert!((ideal.crlb_sqrt_deg.unwrap() - 0.005_645_314_709_466_435).abs() < 1e-15);
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(&cfg, "M = 16\ntrials = 7\nseed = 5\nbits = [3]\nsnr_grid_db = [10.0]\nestimators = [\"esprit\"]\n").unwrap();
    let o = cli(&["rmse-vs-snr", "--config", cfg.to_str().unwrap(), "--trials", "9", "--aqnm"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# M = 16"));
    assert!(text.contains("# quantizer_mode = \"aqnm\""));
    let res = parse_csv(&text).unwrap();
    assert_eq!(res.rows.len(), 1);
    assert_eq!(res.rows[0].trials, 9);
}

#[test]
fn spectrum_dump() {
    let o = cli(&["spectrum", "--grid-step", "1", "--exact-covariance", "--bits", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 179);
    let peak = rows.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert_eq!(peak.0, 15.0);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    assert_eq!(cli(&["bogus"]).status.code(), Some(1));
    assert_eq!(cli(&["loss-vs-bits", "--bits", "0"]).status.code(), Some(1));
    assert_eq!(cli(&["loss-vs-bits", "--snr-db", "x"]).status.code(), Some(1));
    assert_eq!(cli(&["loss-vs-bits", "--config", "/nonexistent/exp.toml"]).status.code(), Some(3));
    assert_eq!(cli(&["loss-vs-bits", "--out", "/nonexistent/dir/out.csv"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    let o = cli(&["loss-vs-bits", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.toml"));
}
