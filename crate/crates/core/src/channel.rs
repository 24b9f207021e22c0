//! Source-type wiretap model `Y = X + N_D`, `Z = X + N_E`, `|X| <= A`, and
//! its reduction to a degraded Gaussian wiretap channel.
//!
//! `(Y / var_D + Z / var_E)` is a sufficient statistic for `X` given
//! `(Y, Z)`; after rescaling it is `X + N_eq` with
//! `var_eq = (1/var_D + 1/var_E)^-1`, so
//! `I(X; Y, Z) - I(X; Z) = I(X; X + N_eq) - I(X; X + N_E)`.

use crate::error::{Error, Result};
use crate::numerics::{differential_entropy, QuadratureSpec};
use crate::rate::RateResult;
use crate::schemes::InputScheme;
use serde::{Deserialize, Serialize};

/// Relative slack allowed when checking a scheme's support against `A`.
const SUPPORT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ChannelParams {
    amplitude: f64,
    var_d: f64,
    var_e: f64,
}

#[derive(Deserialize)]
struct RawParams {
    amplitude: f64,
    var_d: f64,
    var_e: f64,
}

impl TryFrom<RawParams> for ChannelParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        Self::new(r.amplitude, r.var_d, r.var_e)
    }
}

impl ChannelParams {
    pub fn new(amplitude: f64, var_d: f64, var_e: f64) -> Result<Self> {
        for (name, v) in [("amplitude", amplitude), ("var_d", var_d), ("var_e", var_e)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            amplitude,
            var_d,
            var_e,
        })
    }

    /// Parameters with the amplitude given through `A^2`.
    pub fn from_a_squared(a_squared: f64, var_d: f64, var_e: f64) -> Result<Self> {
        Self::new(a_squared.sqrt(), var_d, var_e)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn var_d(&self) -> f64 {
        self.var_d
    }

    pub fn var_e(&self) -> f64 {
        self.var_e
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Result<Self> {
        Self::new(amplitude, self.var_d, self.var_e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalentWiretap {
    amplitude: f64,
    var_eq: f64,
    var_e: f64,
}

impl EquivalentWiretap {
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn var_eq(&self) -> f64 {
        self.var_eq
    }

    pub fn var_e(&self) -> f64 {
        self.var_e
    }

    pub fn sigma_eq(&self) -> f64 {
        self.var_eq.sqrt()
    }

    pub fn sigma_e(&self) -> f64 {
        self.var_e.sqrt()
    }

    /// `0.5 ln(var_E / var_eq)`, strictly positive.
    pub fn rate_offset(&self) -> f64 {
        0.5 * (self.var_e / self.var_eq).ln()
    }
}

pub fn equivalent_channel(params: &ChannelParams) -> EquivalentWiretap {
    EquivalentWiretap {
        amplitude: params.amplitude,
        var_eq: 1.0 / (1.0 / params.var_d + 1.0 / params.var_e),
        var_e: params.var_e,
    }
}

pub(crate) fn check_support(params: &ChannelParams, scheme: &InputScheme) -> Result<()> {
    scheme.validate()?;
    let support = scheme.support_radius();
    if support > params.amplitude * (1.0 + SUPPORT_SLACK) {
        return Err(Error::UnsupportedScheme {
            support,
            amplitude: params.amplitude,
        });
    }
    Ok(())
}

/// Secret-key rate `h(X + N_eq) - h(X + N_E) + 0.5 ln(var_E / var_eq)` in
/// nats, with default quadrature settings.
pub fn secret_key_rate(params: &ChannelParams, scheme: &InputScheme) -> Result<RateResult> {
    secret_key_rate_with(params, scheme, &QuadratureSpec::default())
}

pub fn secret_key_rate_with(
    params: &ChannelParams,
    scheme: &InputScheme,
    quad: &QuadratureSpec,
) -> Result<RateResult> {
    check_support(params, scheme)?;
    let eq = equivalent_channel(params);
    let h_eq = differential_entropy(&scheme.output_density(eq.sigma_eq())?, quad)?;
    let h_e = differential_entropy(&scheme.output_density(eq.sigma_e())?, quad)?;
    let offset = eq.rate_offset();
    Ok(RateResult::new(
        h_eq.nats - h_e.nats + offset,
        h_eq.abs_error + h_e.abs_error,
    )
    .with_term("h_legitimate", h_eq.nats)
    .with_term("h_eavesdropper", h_e.nats)
    .with_term("offset", offset))
}
