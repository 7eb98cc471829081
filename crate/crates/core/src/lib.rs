//! Trust metrics for open multi-agent societies.
//!
//! An agent's trust is a weighted blend of what it reports about itself and
//! what witnesses found in their own dealings with it. Witness ratings are
//! beta-reputation rating vectors, discounted by a per-witness credibility
//! weight that shrinks multiplicatively whenever a witness's claims disagree
//! with what the requester later observes.
//!
//! * [`score`]: beta machinery, point estimate, composite trust
//! * [`ledger`]: pairwise rating log with JSON Lines persistence
//! * [`weighting`]: witness credibility weights and their update
//! * [`referral`]: acquaintance graph and bounded witness discovery
//! * [`aggregator`]: aggregate witness rating and the end-to-end query
//! * [`sim`]: seeded society simulator and figure-data export
//! * [`scenario`]: JSON scenario files

mod agent;
pub mod aggregator;
pub mod error;
pub mod ledger;
pub mod referral;
pub mod scenario;
pub mod score;
pub mod sim;
pub mod weighting;

pub use agent::AgentId;
pub use aggregator::{agr_mean_weighted, agr_pooled, assess, trust_query, AgrStrategy};
pub use error::{Error, Result};
pub use ledger::{pooled_aggregate, Ledger, Outcome, RatingEvent};
pub use referral::{collect_reports, discover_witnesses, ReferralGraph, WitnessQuery};
pub use scenario::ScenarioFile;
pub use score::{
    beta_expectation, beta_pdf, compute_trust, deviation_check, own_reputation_component,
    reputation_score, AgentRecord, RatingVector, TrustReport, TrustWeights, WitnessScore,
};
pub use sim::{
    export_figures, replay_table_scenario, run_scenario, BehaviorKind, BehaviorProfile,
    ScenarioConfig, SimResult,
};
pub use weighting::{
    theta, update_weight, weighted_score, ThetaRule, WeightTable, WitnessReport, WitnessWeight,
    WEIGHT_FLOOR,
};
