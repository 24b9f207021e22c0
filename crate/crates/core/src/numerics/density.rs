//! Output densities of `T = X + N`, `N ~ N(0, sigma^2)`, for each input law.

use super::special::{central_probability, gaussian_pdf, normal_interval_probability};
use crate::error::{Error, Result};
use crate::solver::DiscreteDistribution;
use serde::Serialize;

/// Half-width of the support hint in noise standard deviations.
const TAIL_SIGMAS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityKind {
    GaussianMixture,
    UniformConv,
    TruncGaussConv,
}

#[derive(Debug, Clone)]
enum Shape {
    Mixture {
        points: Vec<f64>,
        probs: Vec<f64>,
        sigma: f64,
    },
    Uniform {
        amplitude: f64,
        sigma: f64,
    },
    TruncGauss {
        amplitude: f64,
        sigma: f64,
        /// sigma^2 + sigma_x^2
        total_var: f64,
        /// sigma_tilde, with sigma_tilde^-2 = sigma_x^-2 + sigma^-2
        tilde: f64,
        /// sigma_tilde^2 / sigma^2
        shrink: f64,
        /// D = Phi(A/sigma_x) - Phi(-A/sigma_x)
        mass: f64,
    },
}

/// A density on the real line with a finite window outside which it is
/// below 1e-16.
#[derive(Debug, Clone)]
pub struct OutputDensity {
    shape: Shape,
    support: (f64, f64),
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl OutputDensity {
    pub fn eval(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::Mixture {
                points,
                probs,
                sigma,
            } => points
                .iter()
                .zip(probs)
                .map(|(&x, &p)| p * gaussian_pdf(t, x, *sigma))
                .sum(),
            Shape::Uniform { amplitude, sigma } => {
                normal_interval_probability((-amplitude - t) / sigma, (amplitude - t) / sigma)
                    / (2.0 * amplitude)
            }
            Shape::TruncGauss {
                amplitude,
                total_var,
                tilde,
                shrink,
                mass,
                ..
            } => {
                let g = gaussian_pdf(t, 0.0, total_var.sqrt());
                let centre = t * shrink;
                let w = normal_interval_probability(
                    (-amplitude - centre) / tilde,
                    (amplitude - centre) / tilde,
                ) / mass;
                g * w
            }
        }
    }

    pub fn support_hint(&self) -> (f64, f64) {
        self.support
    }

    pub fn kind(&self) -> DensityKind {
        match self.shape {
            Shape::Mixture { .. } => DensityKind::GaussianMixture,
            Shape::Uniform { .. } => DensityKind::UniformConv,
            Shape::TruncGauss { .. } => DensityKind::TruncGaussConv,
        }
    }

    /// Standard deviation of the additive Gaussian noise.
    pub fn noise_sigma(&self) -> f64 {
        match self.shape {
            Shape::Mixture { sigma, .. }
            | Shape::Uniform { sigma, .. }
            | Shape::TruncGauss { sigma, .. } => sigma,
        }
    }

    /// Sorted panel boundaries for adaptive quadrature over the support
    /// window: features (mass points, interval edges) are bracketed at a few
    /// noise widths and the rest is cut into coarse panels.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.support;
        let sigma = self.noise_sigma();
        let features: Vec<f64> = match &self.shape {
            Shape::Mixture { points, .. } => points.clone(),
            Shape::Uniform { amplitude, .. } | Shape::TruncGauss { amplitude, .. } => {
                vec![-amplitude, *amplitude]
            }
        };
        let mut cuts = vec![lo, hi];
        for &c in &features {
            for k in [-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0] {
                cuts.push(c + k * sigma);
            }
        }
        let coarse = 64usize;
        let step = (hi - lo) / coarse as f64;
        cuts.extend((1..coarse).map(|i| lo + step * i as f64));
        cuts.retain(|c| *c >= lo && *c <= hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (hi - lo));
        cuts
    }
}

/// `X ~ U(-A, A)`:
/// `p_T(t) = [Q((-A - t)/sigma) - Q((A - t)/sigma)] / (2A)`.
pub fn density_uniform_conv(amplitude: f64, sigma: f64) -> Result<OutputDensity> {
    check_positive("amplitude", amplitude)?;
    check_positive("sigma", sigma)?;
    let reach = amplitude + TAIL_SIGMAS * sigma;
    Ok(OutputDensity {
        shape: Shape::Uniform { amplitude, sigma },
        support: (-reach, reach),
    })
}

/// Ratio `A / sigma_x` outside which the truncated-Gaussian closed form is
/// treated as degenerate.
pub const TRUNCATION_RATIO_LIMITS: (f64, f64) = (1e-8, 1e8);

/// `X` zero-mean Gaussian with scale `sigma_x` truncated to `[-A, A]`:
/// `p_T(t) = g(t) w(t)` with `g` the `N(0, sigma^2 + sigma_x^2)` density and
/// `w(t) = P(N(t sigma_tilde^2 / sigma^2, sigma_tilde^2) in [-A, A]) / D`.
pub fn density_trunc_gauss_conv(amplitude: f64, sigma_x: f64, sigma: f64) -> Result<OutputDensity> {
    check_positive("amplitude", amplitude)?;
    check_positive("sigma_x", sigma_x)?;
    check_positive("sigma", sigma)?;
    let ratio = amplitude / sigma_x;
    if !(TRUNCATION_RATIO_LIMITS.0..=TRUNCATION_RATIO_LIMITS.1).contains(&ratio) {
        return Err(Error::DegenerateTruncation { ratio });
    }
    let mass = central_probability(ratio);
    if mass.is_nan() || mass <= 0.0 {
        return Err(Error::DegenerateTruncation { ratio });
    }
    let inv_tilde_sq = 1.0 / (sigma_x * sigma_x) + 1.0 / (sigma * sigma);
    let tilde_sq = 1.0 / inv_tilde_sq;
    let reach = amplitude + TAIL_SIGMAS * sigma;
    Ok(OutputDensity {
        shape: Shape::TruncGauss {
            amplitude,
            sigma,
            total_var: sigma * sigma + sigma_x * sigma_x,
            tilde: tilde_sq.sqrt(),
            shrink: tilde_sq / (sigma * sigma),
            mass,
        },
        support: (-reach, reach),
    })
}

/// Gaussian mixture induced by a discrete input.
pub fn density_discrete_conv(dist: &DiscreteDistribution, sigma: f64) -> Result<OutputDensity> {
    check_positive("sigma", sigma)?;
    let points = dist.points().to_vec();
    let lo = points[0] - TAIL_SIGMAS * sigma;
    let hi = points[points.len() - 1] + TAIL_SIGMAS * sigma;
    Ok(OutputDensity {
        shape: Shape::Mixture {
            points,
            probs: dist.probs().to_vec(),
            sigma,
        },
        support: (lo, hi),
    })
}
