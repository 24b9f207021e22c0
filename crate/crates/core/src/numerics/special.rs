//! Standard-normal special functions.
//!
//! Tail probabilities go through `erfc` so that the deep tails used by the
//! closed-form bounds keep full relative precision.

use libm::{erf, erfc};
use std::f64::consts::{PI, SQRT_2};

/// 1 / sqrt(2 pi)
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    q_function(-x)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Density of `N(mean, sigma^2)` at `x`.
pub fn gaussian_pdf(x: f64, mean: f64, sigma: f64) -> f64 {
    normal_pdf((x - mean) / sigma) / sigma
}

/// `P(-a <= N(0,1) <= a)`, computed without cancellation for small `a`.
pub fn central_probability(a: f64) -> f64 {
    erf(a / SQRT_2)
}

/// `P(lo <= N(0,1) <= hi)` for `lo <= hi`.
///
/// Picks whichever of the two tails keeps the subtraction away from 1 - 1.
pub fn normal_interval_probability(lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let p = if lo >= 0.0 {
        q_function(lo) - q_function(hi)
    } else if hi <= 0.0 {
        q_function(-hi) - q_function(-lo)
    } else {
        1.0 - q_function(-lo) - q_function(hi)
    };
    p.max(0.0)
}

/// Differential entropy of `N(0, variance)` in nats.
pub fn gaussian_entropy(variance: f64) -> f64 {
    0.5 * (2.0 * PI * std::f64::consts::E * variance).ln()
}

/// `ln cosh(x)` without overflow.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_at_zero_is_half() {
        assert_eq!(q_function(0.0), 0.5);
    }

    #[test]
    fn q_far_tail_vanishes() {
        assert!(q_function(40.0) < 1e-300);
        assert!(q_function(40.0) >= 0.0);
    }

    #[test]
    fn q_at_one_matches_tabulated_value() {
        // erfc(1/sqrt 2) / 2, tabulated to 16 digits
        assert!((q_function(1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
    }

    #[test]
    fn q_is_complementary_on_grid() {
        for i in 0..=2000 {
            let x = -10.0 + 0.01 * i as f64;
            assert!(
                (q_function(x) + q_function(-x) - 1.0).abs() <= 1e-15,
                "x = {x}"
            );
        }
    }

    #[test]
    fn q_is_monotone_decreasing() {
        let mut prev = q_function(-12.0);
        for i in 1..=2400 {
            let x = -12.0 + 0.01 * i as f64;
            let q = q_function(x);
            assert!(q <= prev, "x = {x}");
            prev = q;
        }
    }

    #[test]
    fn interval_probability_agrees_with_q_difference() {
        for &(lo, hi) in &[(-1.0, 1.0), (0.5, 2.0), (-3.0, -0.2), (-0.1, 8.0)] {
            let direct = q_function(lo) - q_function(hi);
            assert!((normal_interval_probability(lo, hi) - direct).abs() < 1e-15);
        }
        assert!((central_probability(1.0) - normal_interval_probability(-1.0, 1.0)).abs() < 1e-15);
    }

    #[test]
    fn interval_probability_keeps_relative_precision_in_the_tail() {
        // Both endpoints far on the right: the naive 1-1 path would return 0.
        let p = normal_interval_probability(-31.0, -30.0);
        assert!(p > 0.0);
        let q = normal_interval_probability(30.0, 31.0);
        assert!(((p - q) / q).abs() < 1e-14);
    }

    #[test]
    fn ln_cosh_is_stable() {
        assert!((ln_cosh(0.3) - 0.3f64.cosh().ln()).abs() < 1e-15);
        assert!((ln_cosh(800.0) - (800.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert_eq!(ln_cosh(0.0), 0.0);
    }
}
