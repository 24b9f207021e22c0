//! Driver for parameter sweeps over the squared amplitude.
//!
//! Each grid point is independent and evaluated on the rayon pool; rows are
//! written in grid order. Output files are a data table (`--format`) plus
//! `<out>.meta.json`, and `<out>.kkt.<ext>` when the KKT profile is
//! requested.

pub mod config;
pub mod output;
pub mod sweep;

use anyhow::{Context, Result};
use config::{Output, SweepConfig};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use sweep::Status;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FATAL: u8 = 1;
pub const EXIT_PARTIAL: u8 = 2;

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => EXIT_OK,
            Status::NoConvergence | Status::Failed => EXIT_PARTIAL,
        }
    }
}

/// Runs a sweep and writes its files (or the table to stdout when no
/// `--out` is given). Per-point failures are reported in the status; only
/// configuration and I/O problems are errors.
pub fn execute(command: &str, cfg: &SweepConfig) -> Result<Status> {
    cfg.validate()?;
    let points = sweep::run(cfg);
    let status = sweep::overall_status(&points);
    for p in points.iter().filter(|p| p.status != Status::Ok) {
        eprintln!(
            "A^2 = {}: {} ({})",
            p.a_squared,
            p.status.as_str(),
            p.messages.join("; ")
        );
    }
    let table = output::sweep_table(cfg, &points).render(cfg.format);
    match &cfg.out_path {
        None => std::io::stdout()
            .write_all(table.as_bytes())
            .context("writing to stdout")?,
        Some(path) => {
            write(path, &table)?;
            write(
                &companion(path, "meta.json"),
                &output::metadata(command, cfg, &points, status),
            )?;
            if cfg.wants(Output::Kkt) {
                let kkt = output::kkt_table(cfg.units, &points).render(cfg.format);
                write(
                    &companion(path, &format!("kkt.{}", cfg.format.extension())),
                    &kkt,
                )?;
            }
        }
    }
    Ok(status)
}

/// Like [`execute`], but the table is the secrecy density profile of the
/// optimal input at each grid point.
pub fn execute_profile(cfg: &SweepConfig) -> Result<Status> {
    cfg.validate()?;
    let points = sweep::run(cfg);
    let status = sweep::overall_status(&points);
    let table = output::kkt_table(cfg.units, &points).render(cfg.format);
    match &cfg.out_path {
        None => std::io::stdout()
            .write_all(table.as_bytes())
            .context("writing to stdout")?,
        Some(path) => {
            write(path, &table)?;
            write(
                &companion(path, "meta.json"),
                &output::metadata("kkt-profile", cfg, &points, status),
            )?;
        }
    }
    Ok(status)
}

/// `<path>.<suffix>`, keeping the original file name intact.
pub fn companion(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
