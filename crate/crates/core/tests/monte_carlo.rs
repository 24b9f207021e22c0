//! Quadrature rates against sampling estimates.

use skcap::numerics::{
    monte_carlo_mi_oracle, monte_carlo_secret_key_oracle, mutual_information, QuadratureSpec,
};
use skcap::schemes::maxentropic_scheme;
use skcap::{secret_key_rate, ChannelParams, DiscreteDistribution, InputScheme};

const SAMPLES: usize = 10_000_000;

#[test]
fn two_point_secret_key_rate_matches_sampling() {
    let p = ChannelParams::new(1.0, 1.0, 2.0).unwrap();
    let s =
        InputScheme::Discrete(DiscreteDistribution::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap());
    let exact = secret_key_rate(&p, &s).unwrap().nats;
    let mc = monte_carlo_secret_key_oracle(&p, &s, SAMPLES, 7);
    assert!((exact - mc).abs() < 1e-2, "{exact} vs {mc}");
}

#[test]
fn uniform_input_mutual_information_matches_sampling() {
    let s = InputScheme::ContinuousUniform { amplitude: 3.0 };
    let exact = mutual_information(&s, 1.0, &QuadratureSpec::default())
        .unwrap()
        .nats;
    let mc = monte_carlo_mi_oracle(&s, 1.0, SAMPLES, 11);
    assert!((exact - mc).abs() < 1e-2, "{exact} vs {mc}");
}

#[test]
fn assorted_schemes_match_sampling() {
    let p = ChannelParams::from_a_squared(6.0, 1.0, 2.25).unwrap();
    let a = p.amplitude();
    let schemes = [
        InputScheme::TruncatedGaussian {
            amplitude: a,
            sigma_x: a,
        },
        maxentropic_scheme(a, 4).unwrap(),
        InputScheme::Discrete(
            DiscreteDistribution::new(vec![-a, 0.3, a], vec![0.2, 0.5, 0.3]).unwrap(),
        ),
    ];
    for (i, s) in schemes.iter().enumerate() {
        let exact = secret_key_rate(&p, s).unwrap().nats;
        let mc = monte_carlo_secret_key_oracle(&p, s, SAMPLES, 100 + i as u64);
        assert!((exact - mc).abs() < 1e-2, "scheme {i}: {exact} vs {mc}");
    }
}
