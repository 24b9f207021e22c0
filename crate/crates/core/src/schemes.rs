//! Suboptimal input laws evaluated through the equivalent-channel rate:
//! maxentropic (uniform over `K` equally spaced points), continuous uniform,
//! and truncated Gaussian.

use crate::channel::{secret_key_rate, ChannelParams};
use crate::error::{Error, Result};
use crate::numerics::{
    density_discrete_conv, density_trunc_gauss_conv, density_uniform_conv, OutputDensity,
};
use crate::optim::{grid_then_golden_max, log_grid};
use crate::rate::RateResult;
use crate::solver::DiscreteDistribution;
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub const DEFAULT_K_MAX: usize = 32;

/// Search window for the truncated-Gaussian scale, as multiples of `A`.
pub const SIGMA_X_RANGE: (f64, f64) = (0.01, 100.0);
const SIGMA_X_GRID_POINTS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InputScheme {
    Discrete(DiscreteDistribution),
    ContinuousUniform { amplitude: f64 },
    TruncatedGaussian { amplitude: f64, sigma_x: f64 },
}

impl InputScheme {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(Error::InvalidParameter(format!(
                "{what} must be positive and finite, got {v}"
            )))
        };
        match *self {
            InputScheme::Discrete(_) => Ok(()),
            InputScheme::ContinuousUniform { amplitude }
                if amplitude.is_nan() || amplitude <= 0.0 =>
            {
                bad("amplitude", amplitude)
            }
            InputScheme::TruncatedGaussian { amplitude, .. }
                if amplitude.is_nan() || amplitude <= 0.0 =>
            {
                bad("amplitude", amplitude)
            }
            InputScheme::TruncatedGaussian { sigma_x, .. }
                if sigma_x.is_nan() || sigma_x <= 0.0 =>
            {
                bad("sigma_x", sigma_x)
            }
            _ => Ok(()),
        }
    }

    /// Smallest `r` with the support inside `[-r, r]`.
    pub fn support_radius(&self) -> f64 {
        match self {
            InputScheme::Discrete(d) => d.max_abs(),
            InputScheme::ContinuousUniform { amplitude }
            | InputScheme::TruncatedGaussian { amplitude, .. } => *amplitude,
        }
    }

    /// Density of `X + N`, `N ~ N(0, sigma^2)`.
    pub fn output_density(&self, sigma: f64) -> Result<OutputDensity> {
        self.validate()?;
        match self {
            InputScheme::Discrete(d) => density_discrete_conv(d, sigma),
            InputScheme::ContinuousUniform { amplitude } => density_uniform_conv(*amplitude, sigma),
            InputScheme::TruncatedGaussian { amplitude, sigma_x } => {
                density_trunc_gauss_conv(*amplitude, *sigma_x, sigma)
            }
        }
    }

    /// The law of `-X`.
    pub fn mirrored(&self) -> Self {
        match self {
            InputScheme::Discrete(d) => InputScheme::Discrete(d.mirrored()),
            other => other.clone(),
        }
    }

    pub fn sampler(&self) -> SchemeSampler {
        match self {
            InputScheme::Discrete(d) => SchemeSampler::Discrete {
                points: d.points().to_vec(),
                index: WeightedIndex::new(d.probs()).expect("probabilities are positive"),
            },
            InputScheme::ContinuousUniform { amplitude } => SchemeSampler::Uniform(*amplitude),
            InputScheme::TruncatedGaussian { amplitude, sigma_x } => SchemeSampler::Truncated {
                amplitude: *amplitude,
                sigma_x: *sigma_x,
            },
        }
    }
}

/// Draws inputs from an [`InputScheme`].
#[derive(Debug, Clone)]
pub enum SchemeSampler {
    Discrete {
        points: Vec<f64>,
        index: WeightedIndex<f64>,
    },
    Uniform(f64),
    Truncated {
        amplitude: f64,
        sigma_x: f64,
    },
}

impl SchemeSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            SchemeSampler::Discrete { points, index } => points[index.sample(rng)],
            SchemeSampler::Uniform(a) => rng.random_range(-a..=*a),
            SchemeSampler::Truncated { amplitude, sigma_x } => {
                let a = *amplitude;
                if a > *sigma_x {
                    // Gaussian proposal, acceptance >= 0.68
                    loop {
                        let z: f64 = rng.sample(StandardNormal);
                        let x = z * sigma_x;
                        if x.abs() <= a {
                            return x;
                        }
                    }
                } else {
                    // uniform proposal, acceptance >= exp(-1/2)
                    loop {
                        let x = rng.random_range(-a..=a);
                        let u: f64 = rng.random();
                        if u <= (-0.5 * (x / sigma_x).powi(2)).exp() {
                            return x;
                        }
                    }
                }
            }
        }
    }
}

/// Uniform law on `k` equally spaced points spanning `[-A, A]`.
pub fn maxentropic_distribution(amplitude: f64, k: usize) -> Result<DiscreteDistribution> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "K must be at least 2, got {k}"
        )));
    }
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "amplitude must be positive, got {amplitude}"
        )));
    }
    let step = 2.0 * amplitude / (k - 1) as f64;
    let points = (0..k)
        .map(|i| {
            if 2 * i + 1 == k {
                0.0
            } else if i + 1 == k {
                amplitude
            } else {
                -amplitude + step * i as f64
            }
        })
        .collect();
    // Sum the equal weights so they total one within rounding.
    let mut probs = vec![1.0 / k as f64; k];
    let excess: f64 = probs.iter().sum::<f64>() - 1.0;
    probs[0] -= excess;
    DiscreteDistribution::new(points, probs)
}

pub fn maxentropic_scheme(amplitude: f64, k: usize) -> Result<InputScheme> {
    maxentropic_distribution(amplitude, k).map(InputScheme::Discrete)
}

/// Exhaustive search over `K = 2..=k_max` for the best maxentropic law.
/// Ties go to the smaller `K`.
pub fn best_maxentropic(params: &ChannelParams, k_max: usize) -> Result<(usize, RateResult)> {
    if k_max < 2 {
        return Err(Error::InvalidParameter(format!(
            "K_max must be at least 2, got {k_max}"
        )));
    }
    let mut best: Option<(usize, RateResult)> = None;
    for k in 2..=k_max {
        let r = secret_key_rate(params, &maxentropic_scheme(params.amplitude(), k)?)?;
        if best.as_ref().is_none_or(|(_, b)| r.nats > b.nats) {
            best = Some((k, r));
        }
    }
    Ok(best.expect("at least one K evaluated"))
}

pub fn uniform_scheme_rate(params: &ChannelParams) -> Result<RateResult> {
    secret_key_rate(
        params,
        &InputScheme::ContinuousUniform {
            amplitude: params.amplitude(),
        },
    )
}

pub fn truncated_gaussian_rate(params: &ChannelParams, sigma_x: f64) -> Result<RateResult> {
    secret_key_rate(
        params,
        &InputScheme::TruncatedGaussian {
            amplitude: params.amplitude(),
            sigma_x,
        },
    )
}

/// The heuristic scale `sigma_x = A`.
pub fn heuristic_truncated_gaussian_rate(params: &ChannelParams) -> Result<RateResult> {
    truncated_gaussian_rate(params, params.amplitude())
}

/// Maximises the truncated-Gaussian rate over `sigma_x in [A/100, 100 A]`:
/// 50-point log grid, then golden section (tolerance `1e-6 A`) between the
/// neighbours of the best grid point.
pub fn optimize_truncated_gaussian(params: &ChannelParams) -> Result<(f64, RateResult)> {
    let a = params.amplitude();
    let grid = log_grid(
        SIGMA_X_RANGE.0 * a,
        SIGMA_X_RANGE.1 * a,
        SIGMA_X_GRID_POINTS,
    );
    let mut failure = None;
    let (sigma_x, _) = grid_then_golden_max(
        |sx| match truncated_gaussian_rate(params, sx) {
            Ok(r) => r.nats,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        &grid,
        1e-6 * a,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((sigma_x, truncated_gaussian_rate(params, sigma_x)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noise_1_225(a_squared: f64) -> ChannelParams {
        ChannelParams::from_a_squared(a_squared, 1.0, 2.25).unwrap()
    }

    #[test]
    fn maxentropic_layouts() {
        let d = maxentropic_distribution(1.0, 2).unwrap();
        assert_eq!(d.points(), &[-1.0, 1.0]);
        assert_eq!(d.probs(), &[0.5, 0.5]);
        let d = maxentropic_distribution(1.0, 3).unwrap();
        assert_eq!(d.points(), &[-1.0, 0.0, 1.0]);
        assert!(d.probs().iter().all(|&p| (p - 1.0 / 3.0).abs() < 1e-15));
        let d = maxentropic_distribution(2.0, 5).unwrap();
        assert_eq!(d.points(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert!(maxentropic_distribution(1.0, 1).is_err());
    }

    #[test]
    fn maxentropic_is_symmetric_for_many_k() {
        for k in 2..40 {
            let d = maxentropic_distribution(1.7, k).unwrap();
            assert!(d.asymmetry().unwrap() < 1e-12, "K = {k}");
            assert_eq!(d.points()[0], -1.7);
            assert_eq!(d.points()[k - 1], 1.7);
        }
    }

    #[test]
    fn best_maxentropic_small_amplitude_is_two_points() {
        let p = ChannelParams::from_a_squared(0.5, 1.0, 2.25).unwrap();
        let (k, r) = best_maxentropic(&p, 16).unwrap();
        assert_eq!(k, 2);
        let two = secret_key_rate(&p, &maxentropic_scheme(p.amplitude(), 2).unwrap()).unwrap();
        assert!(r.nats >= two.nats);
    }

    #[test]
    fn best_maxentropic_dominates_two_points() {
        let p = noise_1_225(10.0);
        let (k, r) = best_maxentropic(&p, 12).unwrap();
        let two = secret_key_rate(&p, &maxentropic_scheme(p.amplitude(), 2).unwrap()).unwrap();
        assert!(r.nats >= two.nats);
        assert!(k > 2);
    }

    #[test]
    fn uniform_rate_vanishes_with_amplitude() {
        let p = ChannelParams::new(1e-3, 1.0, 2.25).unwrap();
        let r = uniform_scheme_rate(&p).unwrap();
        assert!(r.nats.abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn truncated_gaussian_collapses_with_scale() {
        let p = noise_1_225(4.0);
        let r = truncated_gaussian_rate(&p, 1e-4 * p.amplitude()).unwrap();
        assert!(r.nats.abs() < 1e-7, "{r:?}");
        assert!(r.nats > -1e-8);
    }

    #[test]
    fn truncated_gaussian_wide_scale_approaches_uniform() {
        let p = noise_1_225(4.0);
        let tg = truncated_gaussian_rate(&p, 1e4 * p.amplitude()).unwrap();
        let u = uniform_scheme_rate(&p).unwrap();
        assert!((tg.nats - u.nats).abs() < 1e-3);
    }

    #[test]
    fn optimized_scale_dominates_heuristic() {
        let p = noise_1_225(4.0);
        let (sx, opt) = optimize_truncated_gaussian(&p).unwrap();
        let heur = heuristic_truncated_gaussian_rate(&p).unwrap();
        assert!(opt.nats >= heur.nats - 1e-9);
        let a = p.amplitude();
        assert!(sx >= 0.01 * a && sx <= 100.0 * a);
    }

    #[test]
    fn sampler_respects_support() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for s in [
            InputScheme::TruncatedGaussian {
                amplitude: 1.0,
                sigma_x: 0.3,
            },
            InputScheme::TruncatedGaussian {
                amplitude: 1.0,
                sigma_x: 3.0,
            },
            InputScheme::ContinuousUniform { amplitude: 2.0 },
        ] {
            let sampler = s.sampler();
            let a = s.support_radius();
            for _ in 0..10_000 {
                assert!(sampler.sample(&mut rng).abs() <= a);
            }
        }
    }

    #[test]
    fn scheme_serde_is_tagged() {
        let s = InputScheme::TruncatedGaussian {
            amplitude: 1.0,
            sigma_x: 0.5,
        };
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains(r#""kind":"truncated-gaussian""#));
        let back: InputScheme = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let d: InputScheme =
            serde_json::from_str(r#"{"kind":"discrete","points":[-1,1],"probs":[0.5,0.5]}"#)
                .unwrap();
        assert_eq!(d.support_radius(), 1.0);
    }
}
