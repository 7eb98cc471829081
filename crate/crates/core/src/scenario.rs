//! Scenario files: a single JSON document describing a society, one trust
//! query, and optionally a simulation run. See `scenarios/scenario.schema.json`
//! at the repository root for the schema.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::aggregator::AgrStrategy;
use crate::error::{Error, Result};
use crate::ledger::RatingEvent;
use crate::referral::WitnessQuery;
use crate::score::{TrustReport, TrustWeights, DEFAULT_DEVIATION_THRESHOLD};
use crate::sim::{
    AgentSpec, BehaviorKind, BehaviorProfile, GraphSpec, QueryPair, ScenarioConfig, SelfReport,
    Society,
};
use crate::weighting::ThetaRule;
use crate::AgentId;

fn default_reliability() -> f64 {
    1.0
}

fn default_cgf() -> u8 {
    1
}

fn default_depth() -> u32 {
    1
}

fn default_half() -> f64 {
    0.5
}

fn default_transactions() -> u32 {
    10
}

fn default_update_every() -> u32 {
    1
}

fn default_threshold() -> f64 {
    DEFAULT_DEVIATION_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentEntry {
    pub id: AgentId,
    #[serde(default = "default_reliability")]
    pub reliability: f64,
    #[serde(default)]
    pub behavior: BehaviorKind,
    #[serde(default)]
    pub noise_level: f64,
    #[serde(default = "default_cgf")]
    pub cgf: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reputation: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transactions: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsEntry {
    #[serde(default = "default_half")]
    pub wg_a: f64,
    #[serde(default = "default_half")]
    pub wg_b: f64,
}

impl Default for WeightsEntry {
    fn default() -> Self {
        WeightsEntry {
            wg_a: 0.5,
            wg_b: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryEntry {
    pub requester: AgentId,
    pub target: AgentId,
    #[serde(default = "default_depth")]
    pub depth_limit: u32,
    #[serde(default)]
    pub weights: WeightsEntry,
    #[serde(default)]
    pub strategy: AgrStrategy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationEntry {
    pub rounds: u32,
    pub seed: u64,
    #[serde(default = "default_transactions")]
    pub transactions_per_round: u32,
    #[serde(default = "default_update_every")]
    pub update_every: u32,
    #[serde(default)]
    pub theta_rule: ThetaRule,
    #[serde(default = "default_threshold")]
    pub deviation_threshold: f64,
    /// Extra (requester, target) pairs queried every round. Defaults to the
    /// scenario's main query.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub queries: Option<Vec<QueryPair>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub agents: Vec<AgentEntry>,
    #[serde(default)]
    pub graph: GraphSpec,
    #[serde(default)]
    pub ledger: Vec<RatingEvent>,
    #[serde(default)]
    pub witness_weights: BTreeMap<AgentId, BTreeMap<AgentId, f64>>,
    pub query: QueryEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationEntry>,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed {
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn weights(&self) -> Result<TrustWeights> {
        let w = self.query.weights;
        TrustWeights::new(w.wg_a, w.wg_b)
            .map_err(|e| Error::validation("query.weights", e.to_string()))
    }

    /// The validated-form config. Without a simulation section the run
    /// parameters take their defaults and `rounds` is 1.
    pub fn config(&self) -> ScenarioConfig {
        let agents = self
            .agents
            .iter()
            .map(|a| AgentSpec {
                id: a.id.clone(),
                reliability: a.reliability,
                behavior: BehaviorProfile {
                    kind: a.behavior,
                    noise_level: a.noise_level,
                },
                community_guarantee: a.cgf,
                self_report: match (a.reputation, a.transactions) {
                    (Some(reputation), Some(transactions)) => Some(SelfReport {
                        reputation,
                        transactions,
                    }),
                    _ => None,
                },
            })
            .collect();
        let main = QueryPair {
            requester: self.query.requester.clone(),
            target: self.query.target.clone(),
        };
        let sim = self.simulation.as_ref();
        ScenarioConfig {
            agents,
            graph: self.graph.clone(),
            seed_events: self.ledger.clone(),
            initial_weights: self.witness_weights.clone(),
            queries: sim
                .and_then(|s| s.queries.clone())
                .unwrap_or_else(|| vec![main]),
            depth_limit: self.query.depth_limit,
            weights: self.weights().unwrap_or_default(),
            strategy: self.query.strategy,
            theta_rule: sim.map(|s| s.theta_rule).unwrap_or_default(),
            rounds: sim.map_or(1, |s| s.rounds),
            transactions_per_round: sim
                .map_or(default_transactions(), |s| s.transactions_per_round),
            update_every: sim.map_or(1, |s| s.update_every),
            deviation_threshold: sim.map_or(DEFAULT_DEVIATION_THRESHOLD, |s| s.deviation_threshold),
            seed: sim.map_or(0, |s| s.seed),
        }
    }

    /// Every violated invariant, each naming the offending field.
    pub fn problems(&self) -> Vec<Error> {
        let mut problems = Vec::new();
        if let Err(e) = self.weights() {
            problems.push(e);
        }
        for (i, a) in self.agents.iter().enumerate() {
            if a.reputation.is_some() != a.transactions.is_some() {
                problems.push(Error::validation(
                    format!("agents[{i}]"),
                    "reputation and transactions must be given together",
                ));
            }
        }
        let declared: Vec<&AgentId> = self.agents.iter().map(|a| &a.id).collect();
        for (name, id) in [
            ("query.requester", &self.query.requester),
            ("query.target", &self.query.target),
        ] {
            if !declared.contains(&id) {
                problems.push(Error::validation(name, format!("undeclared agent {id}")));
            }
        }
        if self.query.requester == self.query.target {
            problems.push(Error::validation(
                "query",
                format!("requester and target are both {}", self.query.requester),
            ));
        }
        problems.extend(
            self.config()
                .problems()
                .into_iter()
                .filter(|e| !matches!(e, Error::Validation { field, .. } if field.starts_with("queries[") && self.simulation.as_ref().is_none_or(|s| s.queries.is_none()))),
        );
        problems
    }

    pub fn validate(&self) -> Result<()> {
        match self.problems().into_iter().next() {
            Some(first) => Err(first),
            None => Ok(()),
        }
    }

    /// The simulation config; fails if the file has no simulation section.
    pub fn simulation_config(&self) -> Result<ScenarioConfig> {
        if self.simulation.is_none() {
            return Err(Error::validation(
                "simulation",
                "section is required to simulate",
            ));
        }
        self.validate()?;
        Ok(self.config())
    }

    /// Runs the file's trust query against its seed society.
    pub fn compute(&self, strategy: Option<AgrStrategy>) -> Result<TrustReport> {
        self.validate()?;
        let society = Society::from_config(&self.config())?;
        let query = WitnessQuery::new(
            self.query.requester.clone(),
            self.query.target.clone(),
            self.query.depth_limit,
        )?;
        society.query(
            &query,
            self.weights()?,
            strategy.unwrap_or(self.query.strategy),
        )
    }
}
