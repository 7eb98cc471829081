//! Seeded agent-society simulator.
//!
//! Each round proceeds in three steps:
//!
//! 1. every agent transacts `transactions_per_round` times with each of its
//!    acquaintances and rates the outcome (success with the partner's
//!    intrinsic reliability);
//! 2. for every configured query the requester collects witness reports,
//!    distorted according to each witness's behaviour, and scores the target;
//! 3. the requester then transacts with the target itself, and every witness
//!    it consulted has its weight multiplied by θ computed from the witness's
//!    claim and the success rate the requester just observed.
//!
//! All randomness comes from one ChaCha8 stream seeded from the config, and
//! every collection is ordered, so a config always yields the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregator::{assess, trust_query, AgrStrategy};
use crate::error::{Error, Result};
use crate::ledger::{pooled_aggregate, Ledger, Outcome, RatingEvent};
use crate::referral::{collect_reports, ReferralGraph, WitnessQuery};
use crate::score::{
    reputation_score, AgentRecord, RatingVector, TrustReport, TrustWeights,
    DEFAULT_DEVIATION_THRESHOLD,
};
use crate::weighting::{theta_with, ThetaRule, WeightTable, WitnessReport};
use crate::AgentId;

/// Name of the generator recorded in every result file.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9) seeded with seed_from_u64";

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum BehaviorKind {
    #[default]
    Honest,
    /// Reports `[U, S]` instead of `[S, U]`.
    Liar,
    /// Flips each reported outcome independently with probability `noise_level`.
    Noisy,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BehaviorProfile {
    pub kind: BehaviorKind,
    pub noise_level: f64,
}

impl BehaviorProfile {
    pub fn honest() -> Self {
        Self::default()
    }

    pub fn liar() -> Self {
        BehaviorProfile {
            kind: BehaviorKind::Liar,
            noise_level: 0.0,
        }
    }

    pub fn noisy(noise_level: f64) -> Self {
        BehaviorProfile {
            kind: BehaviorKind::Noisy,
            noise_level,
        }
    }

    /// What a witness with this profile says when its true history is `truth`.
    pub fn report<R: Rng>(&self, truth: RatingVector, rng: &mut R) -> RatingVector {
        match self.kind {
            BehaviorKind::Honest => truth,
            BehaviorKind::Liar => truth.swapped(),
            BehaviorKind::Noisy => {
                let p = self.noise_level;
                let lost = (0..truth.successful).filter(|_| rng.random_bool(p)).count() as u64;
                let gained = (0..truth.unsuccessful)
                    .filter(|_| rng.random_bool(p))
                    .count() as u64;
                RatingVector::new(
                    truth.successful - lost + gained,
                    truth.unsuccessful - gained + lost,
                )
            }
        }
    }
}

/// An agent's account of itself, used verbatim as its record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfReport {
    pub reputation: u64,
    pub transactions: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub id: AgentId,
    pub reliability: f64,
    pub behavior: BehaviorProfile,
    pub community_guarantee: u8,
    /// Fixed self-report. When absent the agent reports exactly what the
    /// ledger holds about it.
    pub self_report: Option<SelfReport>,
}

impl AgentSpec {
    pub fn new(id: impl Into<AgentId>, reliability: f64, behavior: BehaviorProfile) -> Self {
        AgentSpec {
            id: id.into(),
            reliability,
            behavior,
            community_guarantee: 1,
            self_report: None,
        }
    }
}

/// Randomly generated acquaintances, drawn from their own seeded stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomGraphSpec {
    pub edge_probability: f64,
    pub seed: u64,
    #[serde(default)]
    pub symmetric: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    #[serde(default)]
    pub edges: Vec<(AgentId, AgentId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomGraphSpec>,
}

impl GraphSpec {
    pub fn build<'a>(
        &self,
        agents: impl IntoIterator<Item = &'a AgentId>,
    ) -> Result<ReferralGraph> {
        let mut graph = ReferralGraph::new();
        for agent in agents {
            graph.add_agent(agent.clone());
        }
        for (from, to) in &self.edges {
            graph.add_edge(from.clone(), to.clone())?;
        }
        if let Some(spec) = self.random {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let ids: Vec<AgentId> = graph.agents().cloned().collect();
            for (i, a) in ids.iter().enumerate() {
                for (j, b) in ids.iter().enumerate() {
                    if i == j || (spec.symmetric && j < i) {
                        continue;
                    }
                    if rng.random_bool(spec.edge_probability) {
                        graph.add_edge(a.clone(), b.clone())?;
                        if spec.symmetric {
                            graph.add_edge(b.clone(), a.clone())?;
                        }
                    }
                }
            }
        }
        Ok(graph)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryPair {
    pub requester: AgentId,
    pub target: AgentId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub agents: Vec<AgentSpec>,
    pub graph: GraphSpec,
    pub seed_events: Vec<RatingEvent>,
    /// Per requester, per witness starting weights.
    pub initial_weights: BTreeMap<AgentId, BTreeMap<AgentId, f64>>,
    pub queries: Vec<QueryPair>,
    pub depth_limit: u32,
    pub weights: TrustWeights,
    pub strategy: AgrStrategy,
    pub theta_rule: ThetaRule,
    pub rounds: u32,
    pub transactions_per_round: u32,
    /// Weight updates fire every this many rounds, using everything the
    /// requester observed since the previous update.
    pub update_every: u32,
    pub deviation_threshold: f64,
    pub seed: u64,
}

impl ScenarioConfig {
    /// A config with one query and defaults for everything else.
    pub fn new(agents: Vec<AgentSpec>, requester: &str, target: &str) -> Self {
        ScenarioConfig {
            agents,
            graph: GraphSpec::default(),
            seed_events: Vec::new(),
            initial_weights: BTreeMap::new(),
            queries: vec![QueryPair {
                requester: requester.into(),
                target: target.into(),
            }],
            depth_limit: 1,
            weights: TrustWeights::balanced(),
            strategy: AgrStrategy::Pooled,
            theta_rule: ThetaRule::Absolute,
            rounds: 10,
            transactions_per_round: 10,
            update_every: 1,
            deviation_threshold: DEFAULT_DEVIATION_THRESHOLD,
            seed: 0,
        }
    }

    /// Every violated constraint, each naming the offending field.
    pub fn problems(&self) -> Vec<Error> {
        let mut problems = Vec::new();
        let mut push = |field: String, message: String| {
            problems.push(Error::Validation { field, message });
        };

        let mut declared = BTreeMap::new();
        for (i, agent) in self.agents.iter().enumerate() {
            if declared.insert(&agent.id, i).is_some() {
                push(
                    format!("agents[{i}].id"),
                    format!("duplicate agent id {}", agent.id),
                );
            }
            if !(0.0..=1.0).contains(&agent.reliability) {
                push(
                    format!("agents[{i}].reliability"),
                    format!("{} is not a probability", agent.reliability),
                );
            }
            if !(0.0..=1.0).contains(&agent.behavior.noise_level) {
                push(
                    format!("agents[{i}].noise_level"),
                    format!("{} is not a probability", agent.behavior.noise_level),
                );
            }
            if agent.community_guarantee > 1 {
                push(
                    format!("agents[{i}].cgf"),
                    format!("must be 0 or 1, got {}", agent.community_guarantee),
                );
            }
            if let Some(sr) = agent.self_report {
                if sr.reputation > sr.transactions {
                    push(
                        format!("agents[{i}].reputation"),
                        format!(
                            "reputation {} exceeds transactions {}",
                            sr.reputation, sr.transactions
                        ),
                    );
                }
            }
        }
        let known = |id: &AgentId| declared.contains_key(id);

        for (i, (from, to)) in self.graph.edges.iter().enumerate() {
            for end in [from, to] {
                if !known(end) {
                    push(
                        format!("graph.edges[{i}]"),
                        format!("undeclared agent {end}"),
                    );
                }
            }
            if from == to {
                push(format!("graph.edges[{i}]"), format!("self-loop on {from}"));
            }
        }
        if let Some(random) = self.graph.random {
            if !(0.0..=1.0).contains(&random.edge_probability) {
                push(
                    "graph.random.edge_probability".into(),
                    format!("{} is not a probability", random.edge_probability),
                );
            }
        }

        let mut last_tick: BTreeMap<(&AgentId, &AgentId), u64> = BTreeMap::new();
        for (i, event) in self.seed_events.iter().enumerate() {
            for end in [&event.rater, &event.ratee] {
                if !known(end) {
                    push(format!("ledger[{i}]"), format!("undeclared agent {end}"));
                }
            }
            if event.rater == event.ratee {
                push(
                    format!("ledger[{i}]"),
                    format!("{} rates itself", event.rater),
                );
            }
            let last = last_tick
                .entry((&event.rater, &event.ratee))
                .or_insert(event.t);
            if event.t < *last {
                push(
                    format!("ledger[{i}].t"),
                    format!("timestamp {} precedes earlier {}", event.t, last),
                );
            }
            *last = (*last).max(event.t);
        }

        for (requester, table) in &self.initial_weights {
            if !known(requester) {
                push(
                    format!("witness_weights.{requester}"),
                    format!("undeclared agent {requester}"),
                );
            }
            for (witness, &w) in table {
                let field = format!("witness_weights.{requester}.{witness}");
                if !known(witness) {
                    push(field.clone(), format!("undeclared agent {witness}"));
                }
                if !(crate::weighting::WEIGHT_FLOOR..=1.0).contains(&w) {
                    push(field, format!("weight {w} outside [0.01, 1]"));
                }
            }
        }

        if self.queries.is_empty() {
            push("queries".into(), "at least one query is required".into());
        }
        for (i, q) in self.queries.iter().enumerate() {
            for (name, end) in [("requester", &q.requester), ("target", &q.target)] {
                if !known(end) {
                    push(
                        format!("queries[{i}].{name}"),
                        format!("undeclared agent {end}"),
                    );
                }
            }
            if q.requester == q.target {
                push(
                    format!("queries[{i}]"),
                    format!("requester and target are both {}", q.requester),
                );
            }
        }

        if self.rounds == 0 {
            push("rounds".into(), "must be at least 1".into());
        }
        if self.transactions_per_round == 0 {
            push("transactions_per_round".into(), "must be at least 1".into());
        }
        if self.update_every == 0 {
            push("update_every".into(), "must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.deviation_threshold) {
            push(
                "deviation_threshold".into(),
                format!("{} outside [0, 1]", self.deviation_threshold),
            );
        }
        problems
    }

    pub fn validate(&self) -> Result<()> {
        match self.problems().into_iter().next() {
            Some(first) => Err(first),
            None => Ok(()),
        }
    }
}

/// Mutable state of a society: who knows whom, who rated whom, and how much
/// each requester believes each witness.
#[derive(Debug, Clone)]
pub struct Society {
    pub specs: BTreeMap<AgentId, AgentSpec>,
    pub graph: ReferralGraph,
    pub ledger: Ledger,
    pub weights: BTreeMap<AgentId, WeightTable>,
}

impl Society {
    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let specs: BTreeMap<AgentId, AgentSpec> = cfg
            .agents
            .iter()
            .map(|a| (a.id.clone(), a.clone()))
            .collect();
        let graph = cfg.graph.build(specs.keys())?;
        let ledger = Ledger::from_events(cfg.seed_events.iter().cloned())?;
        let mut weights = BTreeMap::new();
        for (requester, table) in &cfg.initial_weights {
            let mut t = WeightTable::new();
            for (witness, &w) in table {
                t.set(witness.clone(), w)?;
            }
            weights.insert(requester.clone(), t);
        }
        Ok(Society {
            specs,
            graph,
            ledger,
            weights,
        })
    }

    /// The record an agent presents about itself right now.
    pub fn record(&self, agent: &AgentId) -> Result<AgentRecord> {
        let spec = self
            .specs
            .get(agent)
            .ok_or_else(|| Error::UnknownAgent(agent.clone()))?;
        let (r, n) = match spec.self_report {
            Some(sr) => (sr.reputation, sr.transactions),
            None => {
                let received = self.ledger.received(agent);
                (received.successful, received.total())
            }
        };
        AgentRecord::new(agent.clone(), r, n, spec.community_guarantee)
    }

    pub fn records(&self) -> Result<BTreeMap<AgentId, AgentRecord>> {
        self.specs
            .keys()
            .map(|id| Ok((id.clone(), self.record(id)?)))
            .collect()
    }

    pub fn weight_table(&self, requester: &AgentId) -> WeightTable {
        self.weights.get(requester).cloned().unwrap_or_default()
    }

    /// One undistorted trust query against the current state.
    pub fn query(
        &self,
        query: &WitnessQuery,
        weights: TrustWeights,
        strategy: AgrStrategy,
    ) -> Result<TrustReport> {
        let records = self.records()?;
        trust_query(
            &self.graph,
            &self.ledger,
            &self.weight_table(query.requester()),
            &records,
            query,
            weights,
            strategy,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub requester: AgentId,
    pub target: AgentId,
    #[serde(flatten)]
    pub report: TrustReport,
    pub deviation_flagged: bool,
    /// Success rate the requester saw when transacting with the target.
    pub observed_r: f64,
    /// Weight updates applied after this query, witness -> (θ, new weight).
    pub updates: BTreeMap<AgentId, (f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u32,
    pub tick: u64,
    pub queries: Vec<QueryRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    /// Final-round queries whose target belongs to the class.
    pub target_queries: usize,
    pub mean_abs_trust_error: Option<f64>,
    pub mean_abs_agr_error: Option<f64>,
    /// (requester, witness) weight entries whose witness belongs to the class.
    pub weight_entries: usize,
    pub mean_final_weight: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rounds: u32,
    pub events: usize,
    pub deviation_flags: usize,
    pub final_weights: BTreeMap<AgentId, BTreeMap<AgentId, f64>>,
    pub classes: BTreeMap<BehaviorKind, ClassSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub rng: String,
    pub config_echo: ScenarioConfig,
    pub rounds: Vec<RoundRecord>,
    /// requester -> witness -> weight at the end of each round.
    pub weight_trajectories: BTreeMap<AgentId, BTreeMap<AgentId, Vec<f64>>>,
    pub summary: Summary,
}

impl SimResult {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn write_json(&self, destination: impl AsRef<Path>) -> Result<()> {
        fs::write(destination, self.to_json()?)?;
        Ok(())
    }

    pub fn final_round(&self) -> Option<&RoundRecord> {
        self.rounds.last()
    }

    pub fn final_weight(&self, requester: &AgentId, witness: &AgentId) -> Option<f64> {
        self.summary
            .final_weights
            .get(requester)?
            .get(witness)
            .copied()
    }

    /// Mean final weight over every witness of `kind` in every requester's table.
    pub fn mean_final_weight(&self, kind: BehaviorKind) -> Option<f64> {
        self.summary.classes.get(&kind)?.mean_final_weight
    }
}

#[derive(Default)]
struct Window {
    successes: u64,
    trials: u64,
    claims: BTreeMap<AgentId, RatingVector>,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<SimResult> {
    let mut society = Society::from_config(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let first_tick = cfg.seed_events.iter().map(|e| e.t + 1).max().unwrap_or(0);
    let queries = cfg
        .queries
        .iter()
        .map(|q| WitnessQuery::new(q.requester.clone(), q.target.clone(), cfg.depth_limit))
        .collect::<Result<Vec<_>>>()?;

    let mut windows: Vec<Window> = queries.iter().map(|_| Window::default()).collect();
    let mut rounds = Vec::with_capacity(cfg.rounds as usize);
    let mut trajectories: BTreeMap<AgentId, BTreeMap<AgentId, Vec<f64>>> = BTreeMap::new();

    for round in 0..cfg.rounds {
        let tick = first_tick + u64::from(round);

        let pairs: Vec<(AgentId, AgentId)> = society
            .graph
            .edges()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        for (rater, ratee) in pairs {
            let p = society.specs[&ratee].reliability;
            for _ in 0..cfg.transactions_per_round {
                let outcome = Outcome::from_success(rng.random_bool(p));
                society.ledger.record(RatingEvent::new(
                    rater.clone(),
                    ratee.clone(),
                    outcome,
                    tick,
                ))?;
            }
        }

        let update_now = (round + 1) % cfg.update_every == 0;
        let mut records = Vec::with_capacity(queries.len());
        for (query, window) in queries.iter().zip(windows.iter_mut()) {
            let requester = query.requester();
            let target = query.target();
            let table = society.weight_table(requester);
            let mut reports: Vec<WitnessReport> =
                collect_reports(&society.graph, query, &society.ledger, &table)?;
            for report in &mut reports {
                report.rating = society.specs[&report.witness]
                    .behavior
                    .report(report.rating, &mut rng);
            }
            let report = assess(
                &reports,
                &society.record(target)?,
                cfg.weights,
                cfg.strategy,
            )?;

            let p = society.specs[target].reliability;
            let mut successes = 0;
            for _ in 0..cfg.transactions_per_round {
                let success = rng.random_bool(p);
                successes += u64::from(success);
                society.ledger.record(RatingEvent::new(
                    requester.clone(),
                    target.clone(),
                    Outcome::from_success(success),
                    tick,
                ))?;
            }
            let observed_r = successes as f64 / f64::from(cfg.transactions_per_round);
            window.successes += successes;
            window.trials += u64::from(cfg.transactions_per_round);
            for r in &reports {
                window.claims.insert(r.witness.clone(), r.rating);
            }

            let mut updates = BTreeMap::new();
            if update_now {
                let window = std::mem::take(window);
                let observed = window.successes as f64 / window.trials as f64;
                let table = society.weights.entry(requester.clone()).or_default();
                for (witness, claim) in window.claims {
                    let theta = theta_with(cfg.theta_rule, reputation_score(claim), observed)?;
                    let weight = table.apply(&witness, theta)?;
                    updates.insert(witness, (theta, weight));
                }
            }

            records.push(QueryRecord {
                requester: requester.clone(),
                target: target.clone(),
                deviation_flagged: report.is_deviant(cfg.deviation_threshold),
                report,
                observed_r,
                updates,
            });
        }

        let expected_len = round as usize;
        for (requester, table) in &society.weights {
            let per_requester = trajectories.entry(requester.clone()).or_default();
            for (witness, weight) in table.iter() {
                let path = per_requester.entry(witness.clone()).or_default();
                // witnesses first seen this round were at the initial weight before
                path.resize(
                    expected_len.max(path.len()),
                    crate::weighting::INITIAL_WEIGHT,
                );
                path.push(weight);
            }
        }

        log::debug!("round {round} done, {} events", society.ledger.len());
        rounds.push(RoundRecord {
            round,
            tick,
            queries: records,
        });
    }

    let summary = summarize(cfg, &society, &rounds);
    Ok(SimResult {
        rng: RNG_ALGORITHM.to_owned(),
        config_echo: cfg.clone(),
        rounds,
        weight_trajectories: trajectories,
        summary,
    })
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn summarize(cfg: &ScenarioConfig, society: &Society, rounds: &[RoundRecord]) -> Summary {
    let kind_of = |id: &AgentId| society.specs[id].behavior.kind;

    let mut trust_errors: BTreeMap<BehaviorKind, Vec<f64>> = BTreeMap::new();
    let mut agr_errors: BTreeMap<BehaviorKind, Vec<f64>> = BTreeMap::new();
    if let Some(last) = rounds.last() {
        for q in &last.queries {
            let p = society.specs[&q.target].reliability;
            let kind = kind_of(&q.target);
            trust_errors
                .entry(kind)
                .or_default()
                .push((q.report.trust - p).abs());
            agr_errors
                .entry(kind)
                .or_default()
                .push((q.report.agr - p).abs());
        }
    }

    let mut final_weights = BTreeMap::new();
    let mut weights_by_kind: BTreeMap<BehaviorKind, Vec<f64>> = BTreeMap::new();
    for (requester, table) in &society.weights {
        let entry: BTreeMap<AgentId, f64> = table.iter().map(|(w, v)| (w.clone(), v)).collect();
        for (witness, &weight) in &entry {
            weights_by_kind
                .entry(kind_of(witness))
                .or_default()
                .push(weight);
        }
        final_weights.insert(requester.clone(), entry);
    }

    let mut classes = BTreeMap::new();
    for kind in [
        BehaviorKind::Honest,
        BehaviorKind::Liar,
        BehaviorKind::Noisy,
    ] {
        let trust = trust_errors.remove(&kind).unwrap_or_default();
        let agr = agr_errors.remove(&kind).unwrap_or_default();
        let weights = weights_by_kind.remove(&kind).unwrap_or_default();
        if trust.is_empty() && weights.is_empty() {
            continue;
        }
        classes.insert(
            kind,
            ClassSummary {
                target_queries: trust.len(),
                mean_abs_trust_error: mean(&trust),
                mean_abs_agr_error: mean(&agr),
                weight_entries: weights.len(),
                mean_final_weight: mean(&weights),
            },
        );
    }

    Summary {
        rounds: cfg.rounds,
        events: society.ledger.len(),
        deviation_flags: rounds
            .iter()
            .flat_map(|r| &r.queries)
            .filter(|q| q.deviation_flagged)
            .count(),
        final_weights,
        classes,
    }
}

/// Witness histories and credibility weights of the five-witness worked
/// example. The fourth witness's weight is the floor value, not zero.
pub const TABLE_WITNESSES: [(&str, u64, u64, f64); 5] = [
    ("W1", 2, 6, 0.5),
    ("W2", 5, 5, 0.75),
    ("W3", 6, 2, 0.8),
    ("W4", 0, 8, 0.01),
    ("W5", 8, 0, 1.0),
];

/// The worked-example society: requester `R` knows five witnesses who have
/// rated target `X`; `X` claims 25 good transactions out of 45 and is
/// community-guaranteed; both trust components weigh 0.5.
pub fn table_society() -> Result<(Society, WitnessQuery)> {
    let mut specs = BTreeMap::new();
    let mut graph = ReferralGraph::with_agents(["R", "X"]);
    let mut ledger = Ledger::new();
    let mut table = WeightTable::new();
    for &(witness, s, u, weight) in &TABLE_WITNESSES {
        graph.add_agent(witness);
        graph.add_edge("R", witness)?;
        let outcomes = std::iter::repeat_n(Outcome::Successful, s as usize)
            .chain(std::iter::repeat_n(Outcome::Unsuccessful, u as usize));
        for (t, outcome) in outcomes.enumerate() {
            ledger.record(RatingEvent::new(witness, "X", outcome, t as u64))?;
        }
        table.set(witness, weight)?;
        specs.insert(
            AgentId::from(witness),
            AgentSpec::new(witness, 0.5, BehaviorProfile::honest()),
        );
    }
    specs.insert(
        "R".into(),
        AgentSpec::new("R", 0.5, BehaviorProfile::honest()),
    );
    let mut target = AgentSpec::new("X", 25.0 / 45.0, BehaviorProfile::honest());
    target.self_report = Some(SelfReport {
        reputation: 25,
        transactions: 45,
    });
    specs.insert("X".into(), target);

    let society = Society {
        specs,
        graph,
        ledger,
        weights: BTreeMap::from([(AgentId::from("R"), table)]),
    };
    Ok((society, WitnessQuery::new("R", "X", 1)?))
}

/// Scores the worked-example society with the pooled strategy.
pub fn replay_table_scenario() -> Result<TrustReport> {
    replay_table_scenario_with(AgrStrategy::Pooled)
}

pub fn replay_table_scenario_with(strategy: AgrStrategy) -> Result<TrustReport> {
    let (society, query) = table_society()?;
    society.query(&query, TrustWeights::balanced(), strategy)
}

pub const FIG2_HEADER: &str =
    "requester,target,witness,successful,unsuccessful,reputation_score,theta,weighted_score";
pub const FIG3_HEADER: &str = "round,requester,target,own_component,witness_component,trust";

/// Per-witness rows of the final round: rating counts, point estimate, weight
/// and weighted score.
pub fn fig2_csv(result: &SimResult) -> String {
    let mut out = String::from(FIG2_HEADER);
    out.push('\n');
    for q in result.final_round().into_iter().flat_map(|r| &r.queries) {
        for w in &q.report.per_witness {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                q.requester,
                q.target,
                w.witness,
                w.successful,
                w.unsuccessful,
                w.raw_score,
                w.theta,
                w.weighted_score
            );
        }
    }
    out
}

/// One row per query per round with the two trust components and their sum.
pub fn fig3_csv(result: &SimResult) -> String {
    let mut out = String::from(FIG3_HEADER);
    out.push('\n');
    for round in &result.rounds {
        for q in &round.queries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                round.round,
                q.requester,
                q.target,
                q.report.own_component,
                q.report.witness_component,
                q.report.trust
            );
        }
    }
    out
}

/// Writes `fig2.csv` and `fig3.csv` into `destination`.
pub fn export_figures(result: &SimResult, destination: impl AsRef<Path>) -> Result<()> {
    let dir = destination.as_ref();
    fs::write(dir.join("fig2.csv"), fig2_csv(result))?;
    fs::write(dir.join("fig3.csv"), fig3_csv(result))?;
    Ok(())
}

/// Sums what the final round's reports said about the target of query `index`.
pub fn final_pooled_claim(result: &SimResult, index: usize) -> Option<RatingVector> {
    let q = result.final_round()?.queries.get(index)?;
    let vectors: Vec<RatingVector> = q
        .report
        .per_witness
        .iter()
        .map(|w| RatingVector::new(w.successful, w.unsuccessful))
        .collect();
    Some(pooled_aggregate(&vectors))
}
