//! Rates, information densities and weight derivatives for symmetric
//! discrete inputs, on a fixed composite quadrature grid per noise level.
//!
//! A symmetric candidate is a list of orbits `{-a, +a}` (or `{0}` when
//! `a = 0`) with total orbit mass `q`. Each orbit contributes
//! `psi_a(y) = (phi_s(y - a) + phi_s(y + a)) / 2` to the output density.
//! Sharing one grid across value, gradient and Hessian keeps the weight
//! derivatives exact for the discretised objective.

use crate::numerics::special::{gaussian_entropy, INV_SQRT_2PI};
use crate::numerics::CompositeRule;
use nalgebra::{DMatrix, DVector};

/// Grid reach beyond `+-A`, in noise standard deviations.
const GRID_REACH: f64 = 12.0;
/// Composite panel width, in noise standard deviations.
const PANEL_WIDTH: f64 = 0.5;
/// Kernel cut-off when integrating against `phi_s(y - x)`.
const KERNEL_CUTOFF: f64 = 14.0;

#[derive(Debug, Clone)]
pub(crate) struct NoiseGrid {
    pub sign: f64,
    pub sigma: f64,
    pub rule: CompositeRule,
    pub noise_entropy: f64,
}

impl NoiseGrid {
    fn new(amplitude: f64, sigma: f64, sign: f64) -> Self {
        let reach = amplitude + GRID_REACH * sigma;
        Self {
            sign,
            sigma,
            rule: CompositeRule::new(-reach, reach, PANEL_WIDTH * sigma, 16),
            noise_entropy: gaussian_entropy(sigma * sigma),
        }
    }

    fn kernel(&self, d: f64) -> f64 {
        let z = d / self.sigma;
        INV_SQRT_2PI / self.sigma * (-0.5 * z * z).exp()
    }

    pub fn orbit_column(&self, a: f64, out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            self.rule
                .nodes
                .iter()
                .map(|&y| 0.5 * (self.kernel(y - a) + self.kernel(y + a))),
        );
    }

    /// `psi_a` and its first two derivatives in `a` at the nodes.
    pub fn orbit_derivatives(&self, a: f64) -> [Vec<f64>; 3] {
        let s2 = self.sigma * self.sigma;
        let n = self.rule.nodes.len();
        let (mut v, mut d1, mut d2) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for &y in &self.rule.nodes {
            let (u, w) = (y - a, y + a);
            let (pu, pw) = (self.kernel(u), self.kernel(w));
            v.push(0.5 * (pu + pw));
            d1.push(0.5 * (pu * u - pw * w) / s2);
            d2.push(0.5 * (pu * (u * u / s2 - 1.0) + pw * (w * w / s2 - 1.0)) / s2);
        }
        [v, d1, d2]
    }

    /// `I = h(f) - h(noise)` for output density values `f` at the nodes.
    pub fn information(&self, f: &[f64]) -> f64 {
        let h: f64 = self
            .rule
            .weights
            .iter()
            .zip(f)
            .map(|(&w, &v)| if v > 0.0 { -w * v * v.ln() } else { 0.0 })
            .sum();
        h - self.noise_entropy
    }

    /// `D(p(.|x) || f)` given `ln f` at the nodes.
    pub fn information_density(&self, x: f64, ln_f: &[f64]) -> f64 {
        let cutoff = KERNEL_CUTOFF * self.sigma;
        let mut acc = 0.0;
        for ((&y, &w), &lf) in self.rule.nodes.iter().zip(&self.rule.weights).zip(ln_f) {
            let d = y - x;
            if d.abs() < cutoff {
                acc += w * self.kernel(d) * lf;
            }
        }
        -self.noise_entropy - acc
    }
}

/// `sum_c sign_c I(X; X + N_c)` over one or two noise levels.
#[derive(Debug, Clone)]
pub(crate) struct Objective {
    pub amplitude: f64,
    pub channels: Vec<NoiseGrid>,
}

/// Orbit columns for every channel: `cols[c][i][n]`.
pub(crate) type Columns = Vec<Vec<Vec<f64>>>;

impl Objective {
    pub fn plain(amplitude: f64, sigma: f64) -> Self {
        Self {
            amplitude,
            channels: vec![NoiseGrid::new(amplitude, sigma, 1.0)],
        }
    }

    pub fn secret_key(amplitude: f64, sigma_eq: f64, sigma_e: f64) -> Self {
        Self {
            amplitude,
            channels: vec![
                NoiseGrid::new(amplitude, sigma_eq, 1.0),
                NoiseGrid::new(amplitude, sigma_e, -1.0),
            ],
        }
    }

    pub fn columns(&self, locations: &[f64]) -> Columns {
        self.channels
            .iter()
            .map(|ch| {
                locations
                    .iter()
                    .map(|&a| {
                        let mut col = Vec::new();
                        ch.orbit_column(a, &mut col);
                        col
                    })
                    .collect()
            })
            .collect()
    }

    pub fn mixture(cols: &[Vec<f64>], masses: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; cols[0].len()];
        for (col, &q) in cols.iter().zip(masses) {
            for (fi, &c) in f.iter_mut().zip(col) {
                *fi += q * c;
            }
        }
        f
    }

    pub fn rate_from_columns(&self, cols: &Columns, masses: &[f64]) -> f64 {
        self.channels
            .iter()
            .zip(cols)
            .map(|(ch, c)| ch.sign * ch.information(&Self::mixture(c, masses)))
            .sum()
    }

    pub fn rate(&self, locations: &[f64], masses: &[f64]) -> f64 {
        self.rate_from_columns(&self.columns(locations), masses)
    }

    /// Value, gradient and Hessian with respect to the orbit masses.
    pub fn weight_derivatives(
        &self,
        cols: &Columns,
        masses: &[f64],
    ) -> (f64, Vec<f64>, DMatrix<f64>) {
        let m = masses.len();
        let mut value = 0.0;
        let mut grad = vec![0.0; m];
        let mut hess = DMatrix::zeros(m, m);
        for (ch, c) in self.channels.iter().zip(cols) {
            let f = Self::mixture(c, masses);
            value += ch.sign * ch.information(&f);
            for (n, (&w, &fv)) in ch.rule.weights.iter().zip(&f).enumerate() {
                if fv <= 0.0 {
                    continue;
                }
                let lf1 = fv.ln() + 1.0;
                for i in 0..m {
                    let pi = c[i][n];
                    grad[i] -= ch.sign * w * pi * lf1;
                    let scaled = ch.sign * w * pi / fv;
                    for j in i..m {
                        hess[(i, j)] -= scaled * c[j][n];
                    }
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                hess[(i, j)] = hess[(j, i)];
            }
        }
        (value, grad, hess)
    }

    /// Value, gradient and Hessian in the joint variables
    /// `(q_0, .., q_{m-1}, a_0, .., a_{m-1})`.
    pub fn joint_derivatives(
        &self,
        locations: &[f64],
        masses: &[f64],
    ) -> (f64, DVector<f64>, DMatrix<f64>) {
        let m = masses.len();
        let mut value = 0.0;
        let mut grad = DVector::zeros(2 * m);
        let mut hess = DMatrix::zeros(2 * m, 2 * m);
        for ch in &self.channels {
            let derivs: Vec<[Vec<f64>; 3]> =
                locations.iter().map(|&a| ch.orbit_derivatives(a)).collect();
            let f: Vec<f64> = (0..ch.rule.nodes.len())
                .map(|n| derivs.iter().zip(masses).map(|(d, &q)| q * d[0][n]).sum())
                .collect();
            value += ch.sign * ch.information(&f);
            // per-node vectors: d f / d(q, a)
            let mut jac = vec![0.0; 2 * m];
            for (n, (&w, &fv)) in ch.rule.weights.iter().zip(&f).enumerate() {
                if fv <= 0.0 {
                    continue;
                }
                let sw = ch.sign * w;
                let lf1 = fv.ln() + 1.0;
                for i in 0..m {
                    jac[i] = derivs[i][0][n];
                    jac[m + i] = masses[i] * derivs[i][1][n];
                }
                for i in 0..2 * m {
                    grad[i] -= sw * jac[i] * lf1;
                    let scaled = sw * jac[i] / fv;
                    for j in i..2 * m {
                        hess[(i, j)] -= scaled * jac[j];
                    }
                }
                for i in 0..m {
                    // second derivatives of f itself
                    hess[(i, m + i)] -= sw * derivs[i][1][n] * lf1;
                    hess[(m + i, m + i)] -= sw * masses[i] * derivs[i][2][n] * lf1;
                }
            }
        }
        for i in 0..2 * m {
            for j in 0..i {
                hess[(i, j)] = hess[(j, i)];
            }
        }
        (value, grad, hess)
    }

    /// Secrecy (or plain) information density `s(x; F)` at each `x`.
    pub fn density_profile(&self, locations: &[f64], masses: &[f64], xs: &[f64]) -> Vec<f64> {
        let cols = self.columns(locations);
        let ln_fs: Vec<Vec<f64>> = cols
            .iter()
            .map(|c| {
                Self::mixture(c, masses)
                    .into_iter()
                    .map(|v| v.max(f64::MIN_POSITIVE).ln())
                    .collect()
            })
            .collect();
        xs.iter()
            .map(|&x| {
                self.channels
                    .iter()
                    .zip(&ln_fs)
                    .map(|(ch, lf)| ch.sign * ch.information_density(x, lf))
                    .sum()
            })
            .collect()
    }
}
