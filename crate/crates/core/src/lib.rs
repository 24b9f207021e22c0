//! Secret-key capacity of the amplitude-constrained Gaussian source model.
//!
//! Alice, Bob and Eve observe `X`, `Y = X + N_D` and `Z = X + N_E` with
//! independent Gaussian noises and a peak constraint `|X| <= A`. The crate
//! reduces the model to an equivalent degraded wiretap channel, evaluates
//! secret-key rates of candidate input laws, searches for the optimal
//! discrete input, and evaluates closed-form bounds. Rates are in nats.

pub mod bounds;
pub mod channel;
pub mod error;
pub mod numerics;
pub mod optim;
pub mod rate;
pub mod schemes;
pub mod solver;

pub use bounds::{bounds_report, BoundsReport};
pub use channel::{equivalent_channel, secret_key_rate, ChannelParams, EquivalentWiretap};
pub use error::{Error, Result};
pub use rate::{bits_to_nats, nats_to_bits, RateResult};
pub use schemes::InputScheme;
pub use solver::{
    plain_capacity, secret_key_capacity, DiscreteDistribution, KktPoint, SolverConfig, SolverReport,
};
