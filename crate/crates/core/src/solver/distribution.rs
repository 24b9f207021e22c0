use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Probabilities must sum to one within this slack.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Minimum relative gap between consecutive mass points.
pub const MIN_RELATIVE_GAP: f64 = 1e-9;

/// Finitely supported input law: strictly increasing mass points with
/// positive probabilities summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub struct DiscreteDistribution {
    points: Vec<f64>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawDistribution {
    points: Vec<f64>,
    probs: Vec<f64>,
}

impl TryFrom<RawDistribution> for DiscreteDistribution {
    type Error = Error;
    fn try_from(raw: RawDistribution) -> Result<Self> {
        Self::new(raw.points, raw.probs)
    }
}

impl From<DiscreteDistribution> for RawDistribution {
    fn from(d: DiscreteDistribution) -> Self {
        Self {
            points: d.points,
            probs: d.probs,
        }
    }
}

impl DiscreteDistribution {
    pub fn new(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} points but {} probabilities",
                points.len(),
                probs.len()
            )));
        }
        if points.iter().chain(&probs).any(|v| !v.is_finite()) {
            return Err(Error::InvalidDistribution("non-finite entry".into()));
        }
        if let Some(p) = probs.iter().find(|&&p| p <= 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "probabilities must be positive, found {p}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        let scale = points.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for w in points.windows(2) {
            if w[1] - w[0] <= MIN_RELATIVE_GAP * scale || w[1] <= w[0] {
                return Err(Error::InvalidDistribution(format!(
                    "points must be strictly increasing and separated, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { points, probs })
    }

    pub fn point_mass(x: f64) -> Self {
        Self {
            points: vec![x],
            probs: vec![1.0],
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.probs.iter().copied())
    }

    /// Largest `|x|` in the support.
    pub fn max_abs(&self) -> f64 {
        self.points.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// The law of `-X`.
    pub fn mirrored(&self) -> Self {
        Self {
            points: self.points.iter().rev().map(|x| -x).collect(),
            probs: self.probs.iter().rev().copied().collect(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, p)| x * p).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.iter().map(|(x, p)| x * x * p).sum()
    }

    /// Largest deviation between the law and its mirror image, over points
    /// and probabilities; `None` when the supports have different sizes.
    pub fn asymmetry(&self) -> Option<f64> {
        let m = self.mirrored();
        if m.len() != self.len() {
            return None;
        }
        Some(
            self.iter()
                .zip(m.iter())
                .map(|((x, p), (y, q))| (x - y).abs().max((p - q).abs()))
                .fold(0.0, f64::max),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_law() {
        let d = DiscreteDistribution::new(vec![-1.0, 0.0, 1.0], vec![0.25, 0.5, 0.25]).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.asymmetry(), Some(0.0));
        assert_eq!(d.mean(), 0.0);
        assert_eq!(d.second_moment(), 0.5);
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(DiscreteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.4]).is_err());
        assert!(DiscreteDistribution::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(DiscreteDistribution::new(vec![0.0], vec![]).is_err());
    }

    #[test]
    fn rejects_unordered_or_merged_points() {
        assert!(DiscreteDistribution::new(vec![1.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0, 1.0 + 1e-12], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn serde_validates() {
        let ok: DiscreteDistribution =
            serde_json::from_str(r#"{"points":[-1.0,1.0],"probs":[0.5,0.5]}"#).unwrap();
        assert_eq!(ok.points(), &[-1.0, 1.0]);
        let bad = serde_json::from_str::<DiscreteDistribution>(
            r#"{"points":[-1.0,1.0],"probs":[0.5,0.6]}"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn mirror_reverses_support() {
        let d = DiscreteDistribution::new(vec![-1.0, 0.5], vec![0.3, 0.7]).unwrap();
        let m = d.mirrored();
        assert_eq!(m.points(), &[-0.5, 1.0]);
        assert_eq!(m.probs(), &[0.7, 0.3]);
    }
}
