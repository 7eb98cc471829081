//! Deterministic fixtures shared by the criterion benches.

use trustnet_core::sim::{AgentSpec, RandomGraphSpec, Society};
use trustnet_core::{
    BehaviorProfile, Outcome, RatingEvent, RatingVector, ScenarioConfig, WitnessQuery,
    WitnessReport,
};

pub fn agent(i: usize) -> String {
    format!("a{i:04}")
}

/// `agents` agents on a symmetric random graph; every fifth is a liar.
pub fn society_config(
    agents: usize,
    edge_probability: f64,
    rounds: u32,
    seed: u64,
) -> ScenarioConfig {
    let specs = (0..agents)
        .map(|i| {
            let behavior = if i % 5 == 3 {
                BehaviorProfile::liar()
            } else {
                BehaviorProfile::honest()
            };
            AgentSpec::new(
                agent(i),
                0.5 + 0.45 * ((i * 37) % 11) as f64 / 10.0,
                behavior,
            )
        })
        .collect();
    let mut cfg = ScenarioConfig::new(specs, &agent(0), &agent(1));
    cfg.graph.random = Some(RandomGraphSpec {
        edge_probability,
        seed,
        symmetric: true,
    });
    cfg.depth_limit = 3;
    cfg.rounds = rounds;
    cfg.seed = seed;
    cfg
}

/// A society whose every edge carries `per_edge` ratings, plus a query from
/// the first agent about the second.
pub fn rated_society(
    agents: usize,
    edge_probability: f64,
    per_edge: u64,
) -> (Society, WitnessQuery) {
    let cfg = society_config(agents, edge_probability, 1, 11);
    let mut society = Society::from_config(&cfg).expect("valid bench config");
    let edges: Vec<(String, String)> = society
        .graph
        .edges()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    for (i, (a, b)) in edges.iter().enumerate() {
        for k in 0..per_edge {
            let outcome = Outcome::from_success((i as u64 * 7 + k) % 10 < 8);
            society
                .ledger
                .record(RatingEvent::new(a.as_str(), b.as_str(), outcome, k))
                .expect("fresh ledger accepts ordered events");
        }
    }
    let query = WitnessQuery::new(agent(0), agent(1), cfg.depth_limit).expect("distinct agents");
    (society, query)
}

/// `n` witness reports with varied counts and weights.
pub fn reports(n: usize) -> Vec<WitnessReport> {
    (0..n)
        .map(|i| WitnessReport {
            witness: agent(i + 2).into(),
            about: agent(1).into(),
            rating: RatingVector::new((i * 13 % 50) as u64, (i * 7 % 20) as u64),
            weight_at_query: 0.01 + 0.99 * ((i * 31) % 100) as f64 / 100.0,
        })
        .collect()
}
