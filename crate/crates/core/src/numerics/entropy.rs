//! Differential entropy and mutual information by adaptive quadrature.

use super::density::OutputDensity;
use super::quadrature::{integrate, QuadratureSpec};
use super::special::{gaussian_entropy, ln_cosh, INV_SQRT_2PI};
use crate::error::{Error, Result};
use crate::rate::RateResult;
use crate::schemes::InputScheme;

/// Densities below this are treated as zero in `p ln p`.
pub const DENSITY_FLOOR: f64 = 1e-300;

fn neg_p_ln_p(p: f64) -> f64 {
    if p < DENSITY_FLOOR {
        0.0
    } else {
        -p * p.ln()
    }
}

/// `h(T) = -int p ln p` over the density's support window.
pub fn differential_entropy(density: &OutputDensity, quad: &QuadratureSpec) -> Result<RateResult> {
    let r = integrate(
        |t| neg_p_ln_p(density.eval(t)),
        &density.breakpoints(),
        quad,
    )?;
    Ok(RateResult::new(r.value, r.abs_error).with_term("entropy", r.value))
}

/// `I(X; X + N)` with `N ~ N(0, sigma^2)`: output entropy minus noise entropy.
pub fn mutual_information(
    scheme: &InputScheme,
    sigma: f64,
    quad: &QuadratureSpec,
) -> Result<RateResult> {
    let density = scheme.output_density(sigma)?;
    let h = differential_entropy(&density, quad)?;
    let noise = gaussian_entropy(sigma * sigma);
    Ok(RateResult::new(h.nats - noise, h.abs_error)
        .with_term("h_output", h.nats)
        .with_term("h_noise", noise))
}

/// Correction term `I` in the entropy of the equal-weight mixture of
/// `N(-A, 1)` and `N(A, 1)`: `h = 0.5 ln(2 pi e) + A^2 - I`, where
///
/// `I = 2 / (sqrt(2 pi) A) e^{-A^2/2} int_0^inf e^{-y^2 / (2A^2)} cosh(y) ln cosh(y) dy`.
///
/// The exponentials are merged into `e^{-(y - A^2)^2 / (2A^2)}` (plus its
/// mirror) so nothing overflows for large `y`.
pub fn mixed_gaussian_entropy_integral(amplitude: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "amplitude must be positive, got {amplitude}"
        )));
    }
    let a = amplitude;
    let a2 = a * a;
    let width = 2.0 * a2;
    let integrand = |y: f64| {
        let bump = (-(y - a2).powi(2) / width).exp() + (-(y + a2).powi(2) / width).exp();
        0.5 * bump * ln_cosh(y)
    };
    let hi = a2 + 40.0 * a;
    let mut cuts: Vec<f64> = [
        0.0,
        a2 - 6.0 * a,
        a2 - 2.0 * a,
        a2,
        a2 + 2.0 * a,
        a2 + 6.0 * a,
        hi,
    ]
    .into_iter()
    .filter(|&c| (0.0..=hi).contains(&c))
    .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    // The prefactor is ~2/(sqrt(2pi) A): scale the tolerance so that `I`
    // itself meets `abs_tol`.
    let prefactor = 2.0 * INV_SQRT_2PI / a;
    let scaled = QuadratureSpec {
        abs_tol: quad.abs_tol / prefactor,
        ..*quad
    };
    let r = integrate(integrand, &cuts, &scaled)?;
    Ok(prefactor * r.value)
}

/// Variance of a density by quadrature over its support window.
pub fn density_variance(density: &OutputDensity, quad: &QuadratureSpec) -> Result<f64> {
    let cuts = density.breakpoints();
    let mean = integrate(|t| t * density.eval(t), &cuts, quad)?.value;
    let second = integrate(|t| t * t * density.eval(t), &cuts, quad)?.value;
    Ok(second - mean * mean)
}
