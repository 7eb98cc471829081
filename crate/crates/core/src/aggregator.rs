//! Combining witness reports into the aggregate rating and assembling the
//! end-to-end trust query.
//!
//! "Average of the scores weighted by θ" admits two readings, both provided:
//!
//! * [`AgrStrategy::Pooled`]: pool every witness's vector, score the pool,
//!   scale by the mean weight.
//! * [`AgrStrategy::MeanWeighted`]: score each witness separately, weight each
//!   score by θ, take the plain mean.
//!
//! With no reports at all the aggregate is 0, not the uninformed prior of 0.5.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::{pooled_aggregate, Ledger};
use crate::referral::{collect_reports, ReferralGraph, WitnessQuery};
use crate::score::{
    compute_trust, reputation_score, AgentRecord, TrustReport, TrustWeights, WitnessScore,
};
use crate::weighting::{WeightTable, WitnessReport};
use crate::AgentId;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgrStrategy {
    #[default]
    Pooled,
    #[serde(alias = "mean-weighted")]
    MeanWeighted,
}

impl AgrStrategy {
    pub fn aggregate(self, reports: &[WitnessReport]) -> f64 {
        match self {
            AgrStrategy::Pooled => agr_pooled(reports),
            AgrStrategy::MeanWeighted => agr_mean_weighted(reports),
        }
    }
}

impl fmt::Display for AgrStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AgrStrategy::Pooled => "pooled",
            AgrStrategy::MeanWeighted => "mean-weighted",
        })
    }
}

impl FromStr for AgrStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pooled" => Ok(AgrStrategy::Pooled),
            "mean-weighted" | "mean_weighted" => Ok(AgrStrategy::MeanWeighted),
            other => Err(Error::validation(
                "strategy",
                format!("expected pooled or mean-weighted, got {other:?}"),
            )),
        }
    }
}

pub fn agr_pooled(reports: &[WitnessReport]) -> f64 {
    if reports.is_empty() {
        return 0.0;
    }
    let mean_theta = reports.iter().map(|r| r.weight_at_query).sum::<f64>() / reports.len() as f64;
    let pooled = pooled_aggregate(reports.iter().map(|r| &r.rating));
    mean_theta * reputation_score(pooled)
}

pub fn agr_mean_weighted(reports: &[WitnessReport]) -> f64 {
    if reports.is_empty() {
        return 0.0;
    }
    reports
        .iter()
        .map(|r| r.weight_at_query * r.raw_score())
        .sum::<f64>()
        / reports.len() as f64
}

fn witness_scores(reports: &[WitnessReport]) -> Vec<WitnessScore> {
    reports
        .iter()
        .map(|r| {
            let raw_score = r.raw_score();
            WitnessScore {
                witness: r.witness.clone(),
                successful: r.rating.successful,
                unsuccessful: r.rating.unsuccessful,
                raw_score,
                theta: r.weight_at_query,
                weighted_score: r.weight_at_query * raw_score,
            }
        })
        .collect()
}

/// Trust in `record`'s agent given an already collected set of reports.
pub fn assess(
    reports: &[WitnessReport],
    record: &AgentRecord,
    weights: TrustWeights,
    strategy: AgrStrategy,
) -> Result<TrustReport> {
    let agr = strategy.aggregate(reports).clamp(0.0, 1.0);
    let mut report = compute_trust(record, agr, weights)?;
    report.per_witness = witness_scores(reports);
    Ok(report)
}

/// Discover witnesses for `query`, collect their reports and score the target.
pub fn trust_query(
    graph: &ReferralGraph,
    ledger: &Ledger,
    witness_weights: &WeightTable,
    records: &BTreeMap<AgentId, AgentRecord>,
    query: &WitnessQuery,
    weights: TrustWeights,
    strategy: AgrStrategy,
) -> Result<TrustReport> {
    let record = records
        .get(query.target())
        .ok_or_else(|| Error::UnknownAgent(query.target().clone()))?;
    let reports = collect_reports(graph, query, ledger, witness_weights)?;
    assess(&reports, record, weights, strategy)
}
