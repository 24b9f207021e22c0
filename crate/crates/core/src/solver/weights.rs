//! Concave maximisation over orbit masses on the probability simplex.
//!
//! Newton directions restricted to the active face, with Armijo
//! backtracking; a projected-gradient step re-admits inactive orbits whose
//! gradient exceeds the active average.

use super::objective::{Columns, Objective};
use nalgebra::{DMatrix, DVector};

const MAX_ITERATIONS: usize = 200;
const ARMIJO: f64 = 1e-4;
/// Relative size of rounding noise in an objective value.
const VALUE_NOISE: f64 = 1e-14;

/// Euclidean projection onto `{q >= 0, sum q = 1}`.
pub(crate) fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumsum += ui;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// `||P(q + g) - q||_inf`, zero exactly at simplex-constrained stationarity.
pub(crate) fn stationarity_residual(q: &[f64], g: &[f64]) -> f64 {
    let shifted: Vec<f64> = q.iter().zip(g).map(|(a, b)| a + b).collect();
    project_simplex(&shifted)
        .iter()
        .zip(q)
        .map(|(p, a)| (p - a).abs())
        .fold(0.0, f64::max)
}

/// Newton step on the face `{d_i = 0 for inactive i, sum d = 0}`.
fn newton_direction(g: &[f64], h: &DMatrix<f64>, active: &[usize]) -> Option<Vec<f64>> {
    let m = active.len();
    if m < 2 {
        return None;
    }
    let scale = active
        .iter()
        .map(|&i| h[(i, i)].abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut kkt = DMatrix::zeros(m + 1, m + 1);
    let mut rhs = DVector::zeros(m + 1);
    for (a, &i) in active.iter().enumerate() {
        for (b, &j) in active.iter().enumerate() {
            kkt[(a, b)] = h[(i, j)];
        }
        kkt[(a, a)] -= 1e-12 * scale;
        kkt[(a, m)] = -1.0;
        kkt[(m, a)] = 1.0;
        rhs[a] = -g[i];
    }
    let sol = kkt.lu().solve(&rhs)?;
    let mut d = vec![0.0; g.len()];
    for (a, &i) in active.iter().enumerate() {
        d[i] = sol[a];
    }
    d.iter().all(|v| v.is_finite()).then_some(d)
}

fn projected_gradient_direction(q: &[f64], g: &[f64]) -> Vec<f64> {
    let shifted: Vec<f64> = q.iter().zip(g).map(|(a, b)| a + b).collect();
    project_simplex(&shifted)
        .iter()
        .zip(q)
        .map(|(p, a)| p - a)
        .collect()
}

/// Armijo backtracking along `d`, capped at the simplex boundary.
fn line_search(
    obj: &Objective,
    cols: &Columns,
    q: &[f64],
    value: f64,
    g: &[f64],
    d: &[f64],
) -> Option<(Vec<f64>, f64)> {
    // Feasible directions sum to zero, so centring `g` removes the
    // cancellation between its nearly equal components.
    let mean = g.iter().sum::<f64>() / g.len() as f64;
    let slope: f64 = g.iter().zip(d).map(|(a, b)| (a - mean) * b).sum();
    if slope <= 0.0 {
        return None;
    }
    let mut t_max: f64 = 1.0;
    let mut blocking = None;
    for (i, (&qi, &di)) in q.iter().zip(d).enumerate() {
        if di < 0.0 && qi / -di < t_max {
            t_max = qi / -di;
            blocking = Some(i);
        }
    }
    let noise = VALUE_NOISE * (1.0 + value.abs());
    let mut t = t_max;
    for _ in 0..60 {
        let mut trial: Vec<f64> = q.iter().zip(d).map(|(a, b)| (a + t * b).max(0.0)).collect();
        if t == t_max {
            if let Some(i) = blocking {
                trial[i] = 0.0;
            }
        }
        let total: f64 = trial.iter().sum();
        trial.iter_mut().for_each(|v| *v /= total);
        let trial_value = obj.rate_from_columns(cols, &trial);
        // Close to the optimum the predicted gain drops below rounding noise
        // and the gradient residual, not the value, decides convergence.
        let accept = if t * slope < noise {
            trial_value >= value - noise
        } else {
            trial_value >= value + ARMIJO * t * slope
        };
        if accept {
            return Some((trial, trial_value));
        }
        t *= 0.5;
    }
    None
}

/// Maximises the objective over masses for fixed columns. Returns the final
/// rate and stationarity residual; `masses` is updated in place and may
/// contain exact zeros.
pub(crate) fn optimize_weights(
    obj: &Objective,
    cols: &Columns,
    masses: &mut Vec<f64>,
    tol: f64,
) -> (f64, f64) {
    let mut q = masses.clone();
    let mut value;
    let mut residual;
    let mut iterations = 0;
    loop {
        let (v, g, h) = obj.weight_derivatives(cols, &q);
        value = v;
        residual = stationarity_residual(&q, &g);
        if residual <= tol || iterations >= MAX_ITERATIONS {
            break;
        }
        iterations += 1;
        let active: Vec<usize> = (0..q.len()).filter(|&i| q[i] > 0.0).collect();
        let mean_g: f64 = active.iter().map(|&i| q[i] * g[i]).sum();
        let wants_entry = (0..q.len()).any(|i| q[i] == 0.0 && g[i] > mean_g + tol);
        let mut step = None;
        if !wants_entry {
            if let Some(d) = newton_direction(&g, &h, &active) {
                step = line_search(obj, cols, &q, value, &g, &d);
            }
        }
        if step.is_none() {
            let d = projected_gradient_direction(&q, &g);
            step = line_search(obj, cols, &q, value, &g, &d);
        }
        match step {
            Some((next, _)) => q = next,
            None => break,
        }
    }
    *masses = q;
    (value, residual)
}
