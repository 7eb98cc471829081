//! Witness credibility weights and their multiplicative update.
//!
//! Each consulted witness's weight is multiplied by a factor θ in (0, 1]
//! that shrinks as the witness's claim about the target disagrees with what
//! the requester later observed. Weights never grow and never drop below
//! [`WEIGHT_FLOOR`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::score::{reputation_score, RatingVector};
use crate::AgentId;

/// Lower bound for both a single θ and a cumulative weight.
pub const WEIGHT_FLOOR: f64 = 0.01;

pub const INITIAL_WEIGHT: f64 = 1.0;

/// How the disagreement between claim and observation becomes θ.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaRule {
    /// `1 - |prob - r| / 2`; penalises over- and under-statement alike.
    #[default]
    Absolute,
    /// `1 - (prob - r) / 2` capped at 1; only over-statement is penalised.
    Signed,
}

/// A witness's claim about a target as seen by a requester.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub witness: AgentId,
    pub about: AgentId,
    pub rating: RatingVector,
    pub weight_at_query: f64,
}

impl WitnessReport {
    pub fn raw_score(&self) -> f64 {
        reputation_score(self.rating)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessWeight {
    pub witness: AgentId,
    pub weight: f64,
}

impl WitnessWeight {
    pub fn new(witness: impl Into<AgentId>) -> Self {
        WitnessWeight {
            witness: witness.into(),
            weight: INITIAL_WEIGHT,
        }
    }
}

fn unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: "[0, 1]",
        })
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "theta",
            value: theta,
            expected: "(0, 1]",
        })
    }
}

/// Update factor for a witness whose claim implied success probability
/// `prob_true` when the requester then observed success rate `observed_r`.
pub fn theta(prob_true: f64, observed_r: f64) -> Result<f64> {
    theta_with(ThetaRule::Absolute, prob_true, observed_r)
}

pub fn theta_with(rule: ThetaRule, prob_true: f64, observed_r: f64) -> Result<f64> {
    let prob = unit("prob_true", prob_true)?;
    let r = unit("observed_r", observed_r)?;
    let gap = match rule {
        ThetaRule::Absolute => (prob - r).abs(),
        ThetaRule::Signed => prob - r,
    };
    Ok((1.0 - gap / 2.0).clamp(WEIGHT_FLOOR, 1.0))
}

pub fn update_weight(w: &WitnessWeight, theta: f64) -> Result<WitnessWeight> {
    check_theta(theta)?;
    Ok(WitnessWeight {
        witness: w.witness.clone(),
        weight: (theta * w.weight).max(WEIGHT_FLOOR),
    })
}

/// `θ · (S + 1) / (S + U + 2)`.
pub fn weighted_score(theta: f64, v: RatingVector) -> Result<f64> {
    check_theta(theta)?;
    Ok(theta * reputation_score(v))
}

/// One requester's view of how credible each witness is. Witnesses never seen
/// before carry [`INITIAL_WEIGHT`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightTable {
    weights: BTreeMap<AgentId, f64>,
}

impl WeightTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, witness: &AgentId) -> f64 {
        self.weights.get(witness).copied().unwrap_or(INITIAL_WEIGHT)
    }

    pub fn weight(&self, witness: &AgentId) -> WitnessWeight {
        WitnessWeight {
            witness: witness.clone(),
            weight: self.get(witness),
        }
    }

    /// Seeds a weight directly. Must lie in `[WEIGHT_FLOOR, 1]`.
    pub fn set(&mut self, witness: impl Into<AgentId>, weight: f64) -> Result<()> {
        if !(WEIGHT_FLOOR..=1.0).contains(&weight) {
            return Err(Error::Domain {
                name: "weight",
                value: weight,
                expected: "[0.01, 1]",
            });
        }
        self.weights.insert(witness.into(), weight);
        Ok(())
    }

    /// Applies one multiplicative update and returns the new weight.
    pub fn apply(&mut self, witness: &AgentId, theta: f64) -> Result<f64> {
        let updated = update_weight(&self.weight(witness), theta)?;
        self.weights.insert(updated.witness, updated.weight);
        Ok(updated.weight)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AgentId, f64)> {
        self.weights.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_examples() {
        assert_eq!(theta(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(theta(1.0, 0.0).unwrap(), 0.5);
        assert!((theta(0.3, 0.7).unwrap() - 0.8).abs() < 1e-12);
        assert!(theta(1.1, 0.5).is_err());
        assert!(theta(0.5, -0.5).is_err());
    }

    #[test]
    fn signed_rule_caps_at_one() {
        assert_eq!(theta_with(ThetaRule::Signed, 0.3, 0.7).unwrap(), 1.0);
        assert!((theta_with(ThetaRule::Signed, 0.7, 0.3).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn update_examples() {
        let w = |x: f64| WitnessWeight {
            witness: AgentId::from("w"),
            weight: x,
        };
        assert_eq!(update_weight(&w(1.0), 0.5).unwrap().weight, 0.5);
        assert_eq!(update_weight(&w(0.5), 1.0).unwrap().weight, 0.5);
        assert_eq!(update_weight(&w(0.02), 0.1).unwrap().weight, 0.01);
        assert!(update_weight(&w(1.0), 0.0).is_err());
        assert!(update_weight(&w(1.0), 1.5).is_err());
    }

    #[test]
    fn weighted_score_rows() {
        let ws = |t, s, u| weighted_score(t, RatingVector::new(s, u)).unwrap();
        assert!((ws(0.5, 2, 6) - 0.15).abs() < 1e-9);
        assert!((ws(0.8, 6, 2) - 0.56).abs() < 1e-9);
        assert!((ws(1.0, 8, 0) - 0.9).abs() < 1e-9);
        assert!(weighted_score(0.0, RatingVector::ZERO).is_err());
    }

    #[test]
    fn table_defaults_and_updates() {
        let mut table = WeightTable::new();
        let w = AgentId::from("w");
        assert_eq!(table.get(&w), 1.0);
        assert_eq!(table.apply(&w, 0.5).unwrap(), 0.5);
        assert_eq!(table.apply(&w, 0.5).unwrap(), 0.25);
        assert!(table.set("v", 0.0).is_err());
        assert!(table.set("v", 0.01).is_ok());
        assert_eq!(table.len(), 2);
    }
}
