//! CSV / JSON tables and the companion metadata file.
//!
//! Floats are written with 12 significant digits in CSV and as shortest
//! round-trip numbers in JSON, so identical inputs give identical bytes.

use crate::config::{Format, Output, SweepConfig, Units};
use crate::sweep::{PointResult, Status};
use serde_json::{json, Map, Value};
use skcap::numerics::QuadratureSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.11e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&rows).expect("plain values serialise");
                s.push('\n');
                s
            }
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

fn opt(v: Option<f64>, units: Units) -> Cell {
    v.map_or(Cell::Empty, |x| Cell::Float(units.convert(x)))
}

/// One row per grid point; columns depend on the requested outputs.
pub fn sweep_table(cfg: &SweepConfig, points: &[PointResult]) -> Table {
    let u = cfg.units;
    let cap = cfg.wants(Output::Capacity);
    let bnd = cfg.wants(Output::Bounds);
    let sch = cfg.wants(Output::Schemes);
    let mut header = vec!["A_squared".to_string()];
    if cap {
        header.push(format!("C_k_{}", u.suffix()));
    }
    if bnd {
        header.push("C_k_UB".into());
        if cap {
            header.push("LB1".into());
        }
        header.extend(["LB2_star", "beta_star", "LB3"].map(String::from));
    }
    if cap {
        header.extend(["K", "kkt_violation"].map(String::from));
    }
    header.push("status".into());
    if bnd {
        header.push("high_A_limit".into());
    }
    if sch {
        header.extend(
            [
                "maxent_best",
                "maxent_K",
                "uniform",
                "trunc_gauss_heuristic",
                "trunc_gauss_opt",
                "sigma_x_opt",
            ]
            .map(String::from),
        );
    }
    let rows = points
        .iter()
        .map(|p| {
            let mut row = vec![Cell::Float(p.a_squared)];
            let c = p.capacity.as_ref();
            if cap {
                row.push(opt(c.map(|r| r.rate_nats), u));
            }
            let b = p.bounds;
            if bnd {
                row.push(opt(b.map(|b| b.ub), u));
                if cap {
                    row.push(opt(p.lb1, u));
                }
                row.push(opt(b.map(|b| b.lb2), u));
                row.push(b.map_or(Cell::Empty, |b| Cell::Float(b.beta_star)));
                row.push(opt(b.map(|b| b.lb3), u));
            }
            if cap {
                row.push(c.map_or(Cell::Empty, |r| Cell::Int(r.num_points_k)));
                row.push(opt(c.map(|r| r.kkt_max_violation), u));
            }
            row.push(Cell::Text(p.status.as_str().into()));
            if bnd {
                row.push(opt(b.map(|b| b.high_a_limit), u));
            }
            if sch {
                let s = p.schemes;
                row.push(opt(s.map(|s| s.maxent_best), u));
                row.push(s.map_or(Cell::Empty, |s| Cell::Int(s.maxent_k)));
                row.push(opt(s.map(|s| s.uniform), u));
                row.push(opt(s.map(|s| s.trunc_gauss_heuristic), u));
                row.push(opt(s.map(|s| s.trunc_gauss_opt), u));
                row.push(s.map_or(Cell::Empty, |s| Cell::Float(s.sigma_x_opt)));
            }
            row
        })
        .collect();
    Table { header, rows }
}

/// Long-format secrecy density profile: one row per (A^2, x).
pub fn kkt_table(units: Units, points: &[PointResult]) -> Table {
    let header = ["A_squared", "x", "s_x", "s_x_minus_rate"]
        .map(String::from)
        .to_vec();
    let mut rows = Vec::new();
    for p in points {
        if let Some((grid, rate)) = p.profile() {
            rows.extend(grid.iter().map(|k| {
                vec![
                    Cell::Float(p.a_squared),
                    Cell::Float(k.x),
                    Cell::Float(units.convert(k.density)),
                    Cell::Float(units.convert(k.density - rate)),
                ]
            }));
        }
    }
    Table { header, rows }
}

/// Solver settings, tolerances and per-point diagnostics.
pub fn metadata(
    command: &str,
    cfg: &SweepConfig,
    points: &[PointResult],
    status: Status,
) -> String {
    let per_point: Vec<Value> = points
        .iter()
        .map(|p| {
            let c = p.capacity.as_ref();
            json!({
                "A_squared": p.a_squared,
                "status": p.status.as_str(),
                "messages": p.messages,
                "K": c.map(|r| r.num_points_k),
                "kkt_violation_nats": c.map(|r| r.kkt_max_violation),
                "converged": c.map(|r| r.converged),
                "weight_residual": c.map(|r| r.weight_residual),
                "C_k_nats": c.map(|r| r.rate_nats),
                "rate_by_k_nats": c.map(|r| &r.rate_by_k),
                "support": c.map(|r| json!({
                    "points": r.distribution.points(),
                    "probs": r.distribution.probs(),
                })),
            })
        })
        .collect();
    let meta = json!({
        "tool": "skcap",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "var_d": cfg.var_d,
        "var_e": cfg.var_e,
        "units": cfg.units,
        "format": cfg.format,
        "outputs": cfg.outputs,
        "seed": cfg.seed,
        "A_squared_grid": cfg.a2_grid,
        "solver": cfg.solver(),
        "quadrature": QuadratureSpec::default(),
        "status": status.as_str(),
        "points": per_point,
    });
    let mut s = serde_json::to_string_pretty(&meta).expect("plain values serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_twelve_significant_digits() {
        let t = Table {
            header: vec!["a".into(), "b".into(), "c".into()],
            rows: vec![vec![Cell::Float(0.1), Cell::Int(3), Cell::Empty]],
        };
        assert_eq!(t.render(Format::Csv), "a,b,c\n1.00000000000e-1,3,\n");
    }

    #[test]
    fn json_keeps_column_order_and_nulls() {
        let t = Table {
            header: vec!["z".into(), "a".into()],
            rows: vec![vec![Cell::Float(f64::NAN), Cell::Text("ok".into())]],
        };
        let s = t.render(Format::Json);
        assert!(s.find("\"z\"").unwrap() < s.find("\"a\"").unwrap());
        assert!(s.contains("null"));
    }
}
