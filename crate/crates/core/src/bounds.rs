//! Closed-form bounds on the secret-key capacity and their limits in `A`.
//! All logarithms are natural.

use crate::channel::{equivalent_channel, ChannelParams};
use crate::error::{Error, Result};
use crate::numerics::special::{q_function, INV_SQRT_2PI};
use crate::optim::{grid_then_golden_max, log_grid};
use crate::solver::{plain_capacity, secret_key_capacity, SolverConfig};
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

/// Search interval for the free parameter of [`lower_bound_2`].
pub const BETA_RANGE: (f64, f64) = (1e-6, 50.0);
const BETA_GRID_POINTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub lb1: f64,
    pub lb2: f64,
    pub beta_star: f64,
    pub lb3: f64,
    pub ub: f64,
    pub high_a_limit: f64,
}

/// `C_BE - C_E`: the plain capacity at the equivalent noise level minus the
/// plain capacity at the eavesdropper's noise level.
pub fn lower_bound_1(params: &ChannelParams, cfg: &SolverConfig) -> Result<f64> {
    let eq = equivalent_channel(params);
    let c_be = plain_capacity(params.amplitude(), eq.sigma_eq(), cfg)?;
    let c_e = plain_capacity(params.amplitude(), eq.sigma_e(), cfg)?;
    Ok(c_be.rate_nats - c_e.rate_nats)
}

pub fn lower_bound_2(params: &ChannelParams, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidBeta(beta));
    }
    let eq = equivalent_channel(params);
    let a = params.amplitude();
    let shifted = beta + a / eq.sigma_e();
    let snr = 2.0 * a * a / eq.var_eq();
    Ok(0.5 * (snr / (PI * E)).ln_1p()
        - (1.0 - 2.0 * q_function(shifted))
            * (2.0 * shifted * INV_SQRT_2PI / (1.0 - 2.0 * q_function(beta))).ln()
        - q_function(beta)
        - beta * INV_SQRT_2PI * (-0.5 * beta * beta).exp()
        + 0.5)
}

/// Maximises [`lower_bound_2`] over `beta` in [`BETA_RANGE`]; returns
/// `(beta_star, value)`.
pub fn maximize_lower_bound_2(params: &ChannelParams) -> (f64, f64) {
    let f = |b: f64| lower_bound_2(params, b).unwrap_or(f64::NEG_INFINITY);
    let grid = log_grid(BETA_RANGE.0, BETA_RANGE.1, BETA_GRID_POINTS);
    grid_then_golden_max(f, &grid, 1e-10)
}

pub fn lower_bound_3(params: &ChannelParams) -> f64 {
    let eq = equivalent_channel(params);
    let a2 = params.amplitude().powi(2);
    let pie = PI * E;
    0.5 * ((6.0 * a2 / eq.var_eq() + 3.0 * pie) / (pie * a2 / params.var_e() + 3.0 * pie)).ln()
}

/// Secret-key capacity under an average power constraint `A^2`.
pub fn upper_bound(params: &ChannelParams) -> f64 {
    let a2 = params.amplitude().powi(2);
    let (d, e) = (params.var_d(), params.var_e());
    0.5 * (a2 * e / ((a2 + e) * d)).ln_1p()
}

/// Common limit of the bounds as `A` grows.
pub fn high_a_limit(params: &ChannelParams) -> f64 {
    0.5 * (params.var_e() / params.var_d()).ln_1p()
}

/// `C_k(A) / (A^2 / (2 var_d))` for each amplitude.
pub fn low_a_ratio(
    params: &ChannelParams,
    amplitudes: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<(f64, f64)>> {
    amplitudes
        .iter()
        .map(|&a| {
            let p = params.with_amplitude(a)?;
            let c = secret_key_capacity(&p, cfg)?;
            Ok((a, c.rate_nats / (a * a / (2.0 * params.var_d()))))
        })
        .collect()
}

pub fn bounds_report(params: &ChannelParams, cfg: &SolverConfig) -> Result<BoundsReport> {
    let (beta_star, lb2) = maximize_lower_bound_2(params);
    Ok(BoundsReport {
        lb1: lower_bound_1(params, cfg)?,
        lb2,
        beta_star,
        lb3: lower_bound_3(params),
        ub: upper_bound(params),
        high_a_limit: high_a_limit(params),
    })
}
