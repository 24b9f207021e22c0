//! Joint Newton refinement of masses and locations for a fixed support.
//!
//! The reduced Hessian is made negative definite by clamping its
//! eigenvalues, so every step is an ascent direction even where the
//! location block is not concave. Masses stay on the simplex through the
//! basis `dq = (u, -sum u)`; locations stay ordered inside `[gap, A]`.

use super::objective::Objective;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

const MAX_ITERATIONS: usize = 40;
const ARMIJO: f64 = 1e-4;
const VALUE_NOISE: f64 = 1e-14;
/// Fraction of the distance to a boundary a single step may cover.
const BOUNDARY_FRACTION: f64 = 0.95;

/// Polishes `(locs, masses)` in place; returns the final rate.
pub(crate) fn polish(obj: &Objective, locs: &mut [f64], masses: &mut [f64], gap: f64) -> f64 {
    let m = masses.len();
    let amplitude = obj.amplitude;
    let (mut value, mut grad, mut hess) = obj.joint_derivatives(locs, masses);
    if m < 1 {
        return value;
    }
    for _ in 0..MAX_ITERATIONS {
        // free locations: positive orbits not pressed against the amplitude
        let free: Vec<usize> = (0..m)
            .filter(|&i| locs[i] > 0.0 && !(locs[i] >= amplitude && grad[m + i] >= 0.0))
            .collect();
        let r = m - 1 + free.len();
        if r == 0 {
            break;
        }
        let mut basis = DMatrix::zeros(2 * m, r);
        for k in 0..m - 1 {
            basis[(k, k)] = 1.0;
            basis[(m - 1, k)] = -1.0;
        }
        for (k, &i) in free.iter().enumerate() {
            basis[(m + i, m - 1 + k)] = 1.0;
        }
        let mut centred = grad.clone();
        let mean = grad.rows(0, m).sum() / m as f64;
        centred.rows_mut(0, m).add_scalar_mut(-mean);
        let g_r = basis.transpose() * &centred;
        let h_r = basis.transpose() * &hess * &basis;
        let eig = SymmetricEigen::new(h_r);
        let scale = eig.eigenvalues.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        if scale == 0.0 {
            break;
        }
        let floor = 1e-10 * scale;
        let coeffs = eig.eigenvectors.transpose() * &g_r;
        let scaled = DVector::from_iterator(
            r,
            coeffs
                .iter()
                .zip(eig.eigenvalues.iter())
                .map(|(c, &l)| c / l.min(-floor).abs()),
        );
        let d_r = &eig.eigenvectors * scaled;
        let d = &basis * d_r;
        let slope = centred.dot(&d);
        let noise = VALUE_NOISE * (1.0 + value.abs());
        if slope <= 0.0 || slope < noise {
            break;
        }
        let t_max = step_limit(locs, masses, &d, gap);
        if t_max <= 0.0 {
            break;
        }
        let mut t = t_max.min(1.0);
        let mut accepted = None;
        for _ in 0..50 {
            let (tl, tq) = trial(locs, masses, &d, t, amplitude);
            let tv = obj.rate(&tl, &tq);
            let ok = if t * slope < noise {
                tv >= value - noise
            } else {
                tv >= value + ARMIJO * t * slope
            };
            if ok {
                accepted = Some((tl, tq));
                break;
            }
            t *= 0.5;
        }
        let Some((tl, tq)) = accepted else { break };
        locs.copy_from_slice(&tl);
        masses.copy_from_slice(&tq);
        (value, grad, hess) = obj.joint_derivatives(locs, masses);
        if t * slope < noise {
            break;
        }
    }
    value
}

fn trial(
    locs: &[f64],
    masses: &[f64],
    d: &DVector<f64>,
    t: f64,
    amplitude: f64,
) -> (Vec<f64>, Vec<f64>) {
    let m = masses.len();
    let mut q: Vec<f64> = (0..m).map(|i| (masses[i] + t * d[i]).max(0.0)).collect();
    let total: f64 = q.iter().sum();
    q.iter_mut().for_each(|v| *v /= total);
    let a = (0..m)
        .map(|i| {
            if locs[i] == 0.0 {
                0.0
            } else {
                (locs[i] + t * d[m + i]).min(amplitude)
            }
        })
        .collect();
    (a, q)
}

/// Largest step keeping masses positive and locations ordered above `gap`.
fn step_limit(locs: &[f64], masses: &[f64], d: &DVector<f64>, gap: f64) -> f64 {
    let m = masses.len();
    let mut t = f64::INFINITY;
    let mut cap = |room: f64, rate: f64| {
        if rate > 0.0 {
            t = t.min(BOUNDARY_FRACTION * room.max(0.0) / rate);
        }
    };
    for i in 0..m {
        cap(masses[i], -d[i]);
        if locs[i] > 0.0 {
            // the amplitude is enforced by clipping in `trial`
            cap(locs[i] - gap, -d[m + i]);
        }
        if i + 1 < m {
            cap(locs[i + 1] - locs[i] - gap, d[m + i] - d[m + i + 1]);
        }
    }
    t
}
