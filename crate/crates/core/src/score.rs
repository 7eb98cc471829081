//! Scoring mathematics: beta density and expectation, the point estimate of a
//! rating vector, and the composite trust formula that blends an agent's
//! self-reported reputation with the witness-derived aggregate rating.
//!
//! Everything here is a pure function over immutable inputs.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::AgentId;

/// Tolerance for the `wg_a + wg_b = 1` constraint.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Default fraction of the trust scale beyond which a self-report is flagged
/// as inconsistent with what the witnesses say.
pub const DEFAULT_DEVIATION_THRESHOLD: f64 = 0.25;

/// Counts of successful and unsuccessful transaction outcomes one agent holds
/// about another.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatingVector {
    pub successful: u64,
    pub unsuccessful: u64,
}

impl RatingVector {
    pub const ZERO: RatingVector = RatingVector::new(0, 0);

    pub const fn new(successful: u64, unsuccessful: u64) -> Self {
        RatingVector {
            successful,
            unsuccessful,
        }
    }

    pub fn total(&self) -> u64 {
        self.successful + self.unsuccessful
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// The same evidence with outcomes inverted.
    pub fn swapped(&self) -> Self {
        RatingVector::new(self.unsuccessful, self.successful)
    }
}

impl Add for RatingVector {
    type Output = RatingVector;

    fn add(self, rhs: Self) -> Self {
        RatingVector::new(
            self.successful + rhs.successful,
            self.unsuccessful + rhs.unsuccessful,
        )
    }
}

impl AddAssign for RatingVector {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sum for RatingVector {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(RatingVector::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a RatingVector> for RatingVector {
    fn sum<I: Iterator<Item = &'a RatingVector>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

/// An agent's own account of its history: how many of its transactions were
/// rated positively, how many it had in total, and whether an established
/// community vouches for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgentRecord {
    agent: AgentId,
    total_reputation: u64,
    total_transactions: u64,
    community_guarantee: u8,
}

impl AgentRecord {
    /// `community_guarantee` must be exactly 0 or 1.
    pub fn new(
        agent: impl Into<AgentId>,
        total_reputation: u64,
        total_transactions: u64,
        community_guarantee: u8,
    ) -> Result<Self> {
        let agent = agent.into();
        if total_reputation > total_transactions {
            return Err(Error::Record {
                agent,
                reason: format!(
                    "reputation {total_reputation} exceeds transaction count {total_transactions}"
                ),
            });
        }
        if community_guarantee > 1 {
            return Err(Error::Record {
                agent,
                reason: format!("community guarantee must be 0 or 1, got {community_guarantee}"),
            });
        }
        Ok(AgentRecord {
            agent,
            total_reputation,
            total_transactions,
            community_guarantee,
        })
    }

    pub fn agent(&self) -> &AgentId {
        &self.agent
    }

    pub fn total_reputation(&self) -> u64 {
        self.total_reputation
    }

    pub fn total_transactions(&self) -> u64 {
        self.total_transactions
    }

    pub fn community_guarantee(&self) -> u8 {
        self.community_guarantee
    }

    /// Copy of this record with the community guarantee set to 1.
    pub fn guaranteed(&self) -> Self {
        AgentRecord {
            community_guarantee: 1,
            ..self.clone()
        }
    }
}

/// Relative weights of the self-reported and witness components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights")]
pub struct TrustWeights {
    wg_a: f64,
    wg_b: f64,
}

#[derive(Deserialize)]
struct RawWeights {
    wg_a: f64,
    wg_b: f64,
}

impl TryFrom<RawWeights> for TrustWeights {
    type Error = Error;

    fn try_from(raw: RawWeights) -> Result<Self> {
        TrustWeights::new(raw.wg_a, raw.wg_b)
    }
}

impl TrustWeights {
    pub fn new(wg_a: f64, wg_b: f64) -> Result<Self> {
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        if !in_unit(wg_a) || !in_unit(wg_b) || ((wg_a + wg_b) - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::Weights { wg_a, wg_b });
        }
        Ok(TrustWeights { wg_a, wg_b })
    }

    pub fn balanced() -> Self {
        TrustWeights {
            wg_a: 0.5,
            wg_b: 0.5,
        }
    }

    pub fn wg_a(&self) -> f64 {
        self.wg_a
    }

    pub fn wg_b(&self) -> f64 {
        self.wg_b
    }
}

impl Default for TrustWeights {
    fn default() -> Self {
        TrustWeights::balanced()
    }
}

/// One witness's contribution to a trust query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessScore {
    pub witness: AgentId,
    pub successful: u64,
    pub unsuccessful: u64,
    pub raw_score: f64,
    pub theta: f64,
    pub weighted_score: f64,
}

/// Outcome of a trust computation, decomposed into its two components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustReport {
    pub trust: f64,
    pub own_component: f64,
    pub witness_component: f64,
    pub agr: f64,
    pub per_witness: Vec<WitnessScore>,
    pub deviation: f64,
}

impl TrustReport {
    pub fn is_deviant(&self, threshold: f64) -> bool {
        self.deviation > threshold
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: "[0, 1]",
        })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: "finite and > 0",
        })
    }
}

/// Beta density `f(p | alpha, beta)`.
///
/// The normalising constant is evaluated in log space so large shape
/// parameters (large rating counts) do not overflow. `p = 0` is rejected when
/// `alpha < 1` and `p = 1` when `beta < 1`, where the density is unbounded.
pub fn beta_pdf(p: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_unit("p", p)?;
    check_positive("alpha", alpha)?;
    check_positive("beta", beta)?;
    if p == 0.0 && alpha < 1.0 {
        return Err(Error::Domain {
            name: "p",
            value: p,
            expected: "p != 0 when alpha < 1",
        });
    }
    if p == 1.0 && beta < 1.0 {
        return Err(Error::Domain {
            name: "p",
            value: p,
            expected: "p != 1 when beta < 1",
        });
    }

    // x * ln(0) is NaN for x = 0; the factor is 1 there.
    let log_power = |exponent: f64, base: f64| {
        if exponent == 0.0 {
            0.0
        } else {
            exponent * base.ln()
        }
    };
    let log_norm = libm::lgamma(alpha + beta) - libm::lgamma(alpha) - libm::lgamma(beta);
    Ok((log_norm + log_power(alpha - 1.0, p) + log_power(beta - 1.0, 1.0 - p)).exp())
}

/// Mean of the beta distribution, `alpha / (alpha + beta)`.
pub fn beta_expectation(alpha: f64, beta: f64) -> Result<f64> {
    check_positive("alpha", alpha)?;
    check_positive("beta", beta)?;
    Ok(alpha / (alpha + beta))
}

/// Point estimate `(S + 1) / (S + U + 2)` of the probability that the next
/// transaction succeeds, under a uniform prior.
pub fn reputation_score(v: RatingVector) -> f64 {
    (v.successful as f64 + 1.0) / (v.successful as f64 + v.unsuccessful as f64 + 2.0)
}

/// `CGF * R / n`, the self-reported share of positively rated transactions,
/// gated by the community guarantee. Zero for an agent with no transactions.
pub fn own_reputation_component(rec: &AgentRecord) -> f64 {
    if rec.total_transactions == 0 {
        return 0.0;
    }
    f64::from(rec.community_guarantee) * rec.total_reputation as f64 / rec.total_transactions as f64
}

/// Distance between what an agent says of itself and what the society says.
pub fn deviation_check(own_avg: f64, agr: f64) -> f64 {
    (own_avg - agr).abs()
}

/// Composite trust `wg_a * own + wg_b * agr`.
///
/// The deviation diagnostic compares the self-report with the community
/// guarantee forced to 1 against `agr`, so it is meaningful even for agents
/// whose self-report does not enter the trust value.
pub fn compute_trust(rec: &AgentRecord, agr: f64, weights: TrustWeights) -> Result<TrustReport> {
    check_unit("agr", agr)?;
    let own_component = weights.wg_a * own_reputation_component(rec);
    let witness_component = weights.wg_b * agr;
    let deviation = deviation_check(own_reputation_component(&rec.guaranteed()), agr);
    Ok(TrustReport {
        trust: (own_component + witness_component).min(1.0),
        own_component,
        witness_component,
        agr,
        per_witness: Vec::new(),
        deviation,
    })
}
