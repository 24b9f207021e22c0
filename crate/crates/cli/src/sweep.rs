//! Evaluates every requested quantity at each grid point.

use crate::config::{Output, SweepConfig};
use rayon::prelude::*;
use serde::Serialize;
use skcap::bounds::{
    high_a_limit, lower_bound_1, lower_bound_3, maximize_lower_bound_2, upper_bound,
};
use skcap::schemes::{
    best_maxentropic, heuristic_truncated_gaussian_rate, optimize_truncated_gaussian,
    uniform_scheme_rate, DEFAULT_K_MAX,
};
use skcap::{secret_key_capacity, ChannelParams, Error, KktPoint, SolverReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NoConvergence,
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NoConvergence => "no_convergence",
            Status::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedBounds {
    pub ub: f64,
    pub lb2: f64,
    pub beta_star: f64,
    pub lb3: f64,
    pub high_a_limit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeRates {
    pub maxent_best: f64,
    pub maxent_k: usize,
    pub uniform: f64,
    pub trunc_gauss_heuristic: f64,
    pub trunc_gauss_opt: f64,
    pub sigma_x_opt: f64,
}

/// Everything computed at one `A^2`; absent fields were not requested or
/// failed (see `status` and `messages`).
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub a_squared: f64,
    pub capacity: Option<SolverReport>,
    pub lb1: Option<f64>,
    pub bounds: Option<ClosedBounds>,
    pub schemes: Option<SchemeRates>,
    pub status: Status,
    pub messages: Vec<String>,
}

impl PointResult {
    pub fn profile(&self) -> Option<(&[KktPoint], f64)> {
        self.capacity
            .as_ref()
            .map(|r| (r.kkt_grid.as_slice(), r.rate_nats))
    }

    fn record<T>(&mut self, what: &str, r: skcap::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                let status = match e {
                    Error::NoConvergence { .. } => Status::NoConvergence,
                    _ => Status::Failed,
                };
                self.status = self.status.max(status);
                self.messages.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

pub fn evaluate_point(cfg: &SweepConfig, a_squared: f64) -> PointResult {
    let mut out = PointResult {
        a_squared,
        capacity: None,
        lb1: None,
        bounds: None,
        schemes: None,
        status: Status::Ok,
        messages: Vec::new(),
    };
    let Some(params) = out.record(
        "parameters",
        ChannelParams::from_a_squared(a_squared, cfg.var_d, cfg.var_e),
    ) else {
        return out;
    };
    let solver = cfg.solver();
    let solve = cfg.wants(Output::Capacity) || cfg.wants(Output::Kkt);
    if solve {
        out.capacity = out.record("capacity", secret_key_capacity(&params, &solver));
    }
    if cfg.wants(Output::Bounds) {
        let (beta_star, lb2) = maximize_lower_bound_2(&params);
        out.bounds = Some(ClosedBounds {
            ub: upper_bound(&params),
            lb2,
            beta_star,
            lb3: lower_bound_3(&params),
            high_a_limit: high_a_limit(&params),
        });
        // LB1 needs two plain-channel solves; only paid for alongside C_k
        if cfg.wants(Output::Capacity) {
            out.lb1 = out.record("lb1", lower_bound_1(&params, &solver));
        }
    }
    if cfg.wants(Output::Schemes) {
        out.schemes = out.record("schemes", scheme_rates(&params));
    }
    out
}

fn scheme_rates(params: &ChannelParams) -> skcap::Result<SchemeRates> {
    let (maxent_k, maxent) = best_maxentropic(params, DEFAULT_K_MAX)?;
    let (sigma_x_opt, tg) = optimize_truncated_gaussian(params)?;
    Ok(SchemeRates {
        maxent_best: maxent.nats,
        maxent_k,
        uniform: uniform_scheme_rate(params)?.nats,
        trunc_gauss_heuristic: heuristic_truncated_gaussian_rate(params)?.nats,
        trunc_gauss_opt: tg.nats,
        sigma_x_opt,
    })
}

/// Evaluates the grid in parallel; results come back in grid order.
pub fn run(cfg: &SweepConfig) -> Vec<PointResult> {
    cfg.a2_grid
        .par_iter()
        .map(|&a2| evaluate_point(cfg, a2))
        .collect()
}

pub fn overall_status(points: &[PointResult]) -> Status {
    points.iter().map(|p| p.status).max().unwrap_or(Status::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Format, Units};

    fn cfg(outputs: &[Output], max_k: usize) -> SweepConfig {
        SweepConfig {
            var_d: 1.0,
            var_e: 2.0,
            a2_grid: vec![0.5, 4.0],
            units: Units::Nats,
            outputs: outputs.iter().copied().collect(),
            seed: 0,
            out_path: None,
            format: Format::Csv,
            max_k,
        }
    }

    #[test]
    fn bounds_only_skips_the_solver() {
        let pts = run(&cfg(&[Output::Bounds], 64));
        assert!(pts
            .iter()
            .all(|p| p.capacity.is_none() && p.lb1.is_none() && p.bounds.is_some()));
        assert_eq!(overall_status(&pts), Status::Ok);
    }

    #[test]
    fn failed_solve_marks_the_row_and_keeps_going() {
        let pts = run(&cfg(&[Output::Capacity, Output::Bounds], 2));
        assert_eq!(pts[0].status, Status::Ok);
        assert_eq!(pts[1].status, Status::NoConvergence);
        assert!(pts[1].bounds.is_some());
        assert!(!pts[1].messages.is_empty());
        assert_eq!(overall_status(&pts), Status::NoConvergence);
    }
}
