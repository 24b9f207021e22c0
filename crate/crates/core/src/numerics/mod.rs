//! Special functions, output densities, quadrature, and entropy evaluators.

pub mod density;
pub mod entropy;
pub mod oracle;
pub mod quadrature;
pub mod special;

pub use density::{
    density_discrete_conv, density_trunc_gauss_conv, density_uniform_conv, DensityKind,
    OutputDensity,
};
pub use entropy::{
    density_variance, differential_entropy, mixed_gaussian_entropy_integral, mutual_information,
};
pub use oracle::{monte_carlo_mi_oracle, monte_carlo_secret_key_oracle};
pub use quadrature::{integrate, CompositeRule, Integral, QuadratureSpec};
pub use special::{gaussian_entropy, normal_cdf, normal_pdf, q_function};
