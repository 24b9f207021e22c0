//! Sweep configuration and the A^2 grid syntax.

use anyhow::{bail, ensure, Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use skcap::{nats_to_bits, SolverConfig};
use std::collections::BTreeSet;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats_to_bits(nats),
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Quantity groups a sweep can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Capacity,
    Schemes,
    Bounds,
    Kkt,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub var_d: f64,
    pub var_e: f64,
    pub a2_grid: Vec<f64>,
    pub units: Units,
    pub outputs: BTreeSet<Output>,
    pub seed: u64,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub max_k: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("var-d", self.var_d), ("var-e", self.var_e)] {
            ensure!(
                v.is_finite() && v > 0.0,
                "--{name} must be a positive number, got {v}"
            );
        }
        ensure!(!self.a2_grid.is_empty(), "the A^2 grid is empty");
        ensure!(
            self.a2_grid.iter().all(|a| a.is_finite() && *a > 0.0),
            "A^2 values must be positive"
        );
        ensure!(
            self.a2_grid.windows(2).all(|w| w[1] > w[0]),
            "the A^2 grid must be strictly increasing"
        );
        ensure!(!self.outputs.is_empty(), "no outputs requested");
        ensure!(
            !self.outputs.contains(&Output::Kkt) || self.out_path.is_some(),
            "the kkt output needs --out"
        );
        self.solver().validate().context("solver configuration")?;
        Ok(())
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            max_k: self.max_k,
            seed: self.seed,
            ..SolverConfig::default()
        }
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}

/// Parses `0.5,1,2` or `start:stop:step` ranges (inclusive), mixed freely.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [v] => out.push(number(v)?),
            [a, b, h] => {
                let (a, b, h) = (number(a)?, number(b)?, number(h)?);
                ensure!(h > 0.0 && b >= a, "bad range {part}");
                let n = ((b - a) / h + 1e-9).floor() as usize;
                ensure!(n < 1_000_000, "range {part} is too long");
                out.extend((0..=n).map(|i| a + i as f64 * h));
            }
            _ => bail!("cannot parse grid entry {part:?}"),
        }
    }
    Ok(out)
}

fn number(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .with_context(|| format!("not a number: {s:?}"))
}
