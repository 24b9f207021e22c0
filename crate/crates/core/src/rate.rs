use serde::Serialize;

/// Named contribution to a rate, e.g. one differential-entropy term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub label: &'static str,
    pub nats: f64,
}

/// A quantity in nats together with its quadrature error estimate and the
/// terms it was assembled from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateResult {
    pub nats: f64,
    pub abs_error: f64,
    pub terms: Vec<Term>,
}

impl RateResult {
    pub fn new(nats: f64, abs_error: f64) -> Self {
        Self {
            nats,
            abs_error,
            terms: Vec::new(),
        }
    }

    pub fn with_term(mut self, label: &'static str, nats: f64) -> Self {
        self.terms.push(Term { label, nats });
        self
    }

    pub fn term(&self, label: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.label == label).map(|t| t.nats)
    }

    pub fn bits(&self) -> f64 {
        nats_to_bits(self.nats)
    }
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

pub fn bits_to_nats(bits: f64) -> f64 {
    bits * std::f64::consts::LN_2
}
