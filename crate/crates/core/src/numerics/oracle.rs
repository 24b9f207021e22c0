//! Sampling-based mutual-information estimates, used to cross-check the
//! quadrature path.
//!
//! Plug-in histogram estimators with `ceil(n^(1/3))` equal-width bins per
//! axis over the sample range. The entropy estimate is biased low by roughly
//! `(bins - 1) / (2n)` nats plus a discretisation term of order
//! `bin_width^2`.

use super::special::gaussian_entropy;
use crate::channel::ChannelParams;
use crate::schemes::InputScheme;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Smallest sample size the estimators are calibrated for.
pub const MIN_SAMPLES: usize = 1_000_000;

fn bins_for(n: usize) -> usize {
    (n as f64).cbrt().ceil() as usize
}

fn histogram_entropy(samples: &[f64]) -> f64 {
    let n = samples.len();
    let bins = bins_for(n);
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in samples {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    plug_in(&counts, n, width)
}

fn plug_in(counts: &[u64], n: usize, cell: f64) -> f64 {
    let n = n as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * (p / cell).ln()
        })
        .sum()
}

fn histogram_entropy_2d(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    let bins = bins_for(n);
    let range = |v: &[f64]| {
        v.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &s| {
                (l.min(s), h.max(s))
            })
    };
    let (xl, xh) = range(xs);
    let (yl, yh) = range(ys);
    let (wx, wy) = ((xh - xl) / bins as f64, (yh - yl) / bins as f64);
    let mut counts = vec![0u64; bins * bins];
    for (&x, &y) in xs.iter().zip(ys) {
        let i = (((x - xl) / wx) as usize).min(bins - 1);
        let j = (((y - yl) / wy) as usize).min(bins - 1);
        counts[i * bins + j] += 1;
    }
    plug_in(&counts, n, wx * wy)
}

/// Histogram estimate of `I(X; X + N)` with `N ~ N(0, sigma^2)`: the
/// plug-in entropy of the simulated outputs minus the noise entropy.
/// Deterministic for a fixed seed.
///
/// # Panics
/// If `n_samples < MIN_SAMPLES` or `sigma` is not positive.
pub fn monte_carlo_mi_oracle(scheme: &InputScheme, sigma: f64, n_samples: usize, seed: u64) -> f64 {
    assert!(
        n_samples >= MIN_SAMPLES,
        "need at least {MIN_SAMPLES} samples"
    );
    let noise = Normal::new(0.0, sigma).expect("sigma must be positive");
    let sampler = scheme.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outputs: Vec<f64> = (0..n_samples)
        .map(|_| sampler.sample(&mut rng) + noise.sample(&mut rng))
        .collect();
    histogram_entropy(&outputs) - gaussian_entropy(sigma * sigma)
}

/// Histogram estimate of `I(X; Y, Z) - I(X; Z)` on the original two-output
/// model, without the equivalent-channel reduction: a 2-D histogram for
/// `(Y, Z)` and a 1-D histogram for `Z`, on a shared set of draws.
///
/// # Panics
/// If `n_samples < MIN_SAMPLES`.
pub fn monte_carlo_secret_key_oracle(
    params: &ChannelParams,
    scheme: &InputScheme,
    n_samples: usize,
    seed: u64,
) -> f64 {
    assert!(
        n_samples >= MIN_SAMPLES,
        "need at least {MIN_SAMPLES} samples"
    );
    let nd = Normal::new(0.0, params.var_d().sqrt()).expect("positive variance");
    let ne = Normal::new(0.0, params.var_e().sqrt()).expect("positive variance");
    let sampler = scheme.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ys = Vec::with_capacity(n_samples);
    let mut zs = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let x = sampler.sample(&mut rng);
        ys.push(x + nd.sample(&mut rng));
        zs.push(x + ne.sample(&mut rng));
    }
    let h_yz = histogram_entropy_2d(&ys, &zs);
    let h_z = histogram_entropy(&zs);
    let i_xyz = h_yz - gaussian_entropy(params.var_d()) - gaussian_entropy(params.var_e());
    let i_xz = h_z - gaussian_entropy(params.var_e());
    i_xyz - i_xz
}
