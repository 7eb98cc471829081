//! Acquaintance graph and bounded breadth-first witness discovery.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::ledger::Ledger;
use crate::weighting::{WeightTable, WitnessReport};
use crate::AgentId;

/// Directed acquaintance graph. An edge `a -> b` means `a` knows `b` and can
/// forward a referral query to it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferralGraph {
    acquaintances: BTreeMap<AgentId, BTreeSet<AgentId>>,
}

impl ReferralGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_agents<I, A>(agents: I) -> Self
    where
        I: IntoIterator<Item = A>,
        A: Into<AgentId>,
    {
        let mut graph = Self::new();
        for agent in agents {
            graph.add_agent(agent);
        }
        graph
    }

    pub fn add_agent(&mut self, agent: impl Into<AgentId>) {
        self.acquaintances.entry(agent.into()).or_default();
    }

    pub fn add_edge(&mut self, from: impl Into<AgentId>, to: impl Into<AgentId>) -> Result<()> {
        let (from, to) = (from.into(), to.into());
        if from == to {
            return Err(Error::Graph(format!("self-loop on {from}")));
        }
        if !self.contains(&to) {
            return Err(Error::UnknownAgent(to));
        }
        match self.acquaintances.get_mut(&from) {
            Some(out) => {
                out.insert(to);
                Ok(())
            }
            None => Err(Error::UnknownAgent(from)),
        }
    }

    /// Adds `a -> b` and `b -> a`.
    pub fn add_mutual(&mut self, a: impl Into<AgentId>, b: impl Into<AgentId>) -> Result<()> {
        let (a, b) = (a.into(), b.into());
        self.add_edge(a.clone(), b.clone())?;
        self.add_edge(b, a)
    }

    pub fn contains(&self, agent: &AgentId) -> bool {
        self.acquaintances.contains_key(agent)
    }

    pub fn agents(&self) -> impl Iterator<Item = &AgentId> {
        self.acquaintances.keys()
    }

    pub fn agent_count(&self) -> usize {
        self.acquaintances.len()
    }

    pub fn acquaintances(&self, agent: &AgentId) -> impl Iterator<Item = &AgentId> {
        self.acquaintances.get(agent).into_iter().flatten()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&AgentId, &AgentId)> {
        self.acquaintances
            .iter()
            .flat_map(|(from, out)| out.iter().map(move |to| (from, to)))
    }

    pub fn edge_count(&self) -> usize {
        self.acquaintances.values().map(BTreeSet::len).sum()
    }

    /// Hop distance from `source` to every agent reachable within `max_hops`.
    pub fn distances_from(&self, source: &AgentId, max_hops: u32) -> BTreeMap<&AgentId, u32> {
        let mut dist = BTreeMap::new();
        let Some((source, _)) = self.acquaintances.get_key_value(source) else {
            return dist;
        };
        dist.insert(source, 0);
        let mut queue = VecDeque::from([source]);
        while let Some(node) = queue.pop_front() {
            let d = dist[node];
            if d == max_hops {
                continue;
            }
            for next in &self.acquaintances[node] {
                if !dist.contains_key(next) {
                    dist.insert(next, d + 1);
                    queue.push_back(next);
                }
            }
        }
        dist
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessQuery {
    requester: AgentId,
    target: AgentId,
    depth_limit: u32,
}

impl WitnessQuery {
    pub fn new(
        requester: impl Into<AgentId>,
        target: impl Into<AgentId>,
        depth_limit: u32,
    ) -> Result<Self> {
        let (requester, target) = (requester.into(), target.into());
        if requester == target {
            return Err(Error::validation(
                "query",
                format!("requester and target are both {requester}"),
            ));
        }
        Ok(WitnessQuery {
            requester,
            target,
            depth_limit,
        })
    }

    pub fn requester(&self) -> &AgentId {
        &self.requester
    }

    pub fn target(&self) -> &AgentId {
        &self.target
    }

    pub fn depth_limit(&self) -> u32 {
        self.depth_limit
    }
}

/// Agents within `depth_limit` hops of the requester that hold at least one
/// rating about the target, ordered by (hop distance, id). Neither the
/// requester nor the target is ever returned.
pub fn discover_witnesses(
    graph: &ReferralGraph,
    query: &WitnessQuery,
    ledger: &Ledger,
) -> Result<Vec<AgentId>> {
    if !graph.contains(&query.requester) {
        return Err(Error::UnknownAgent(query.requester.clone()));
    }
    let mut found: Vec<(u32, &AgentId)> = graph
        .distances_from(&query.requester, query.depth_limit)
        .into_iter()
        .filter(|&(agent, d)| {
            d > 0 && *agent != query.target && ledger.has_rated(agent, &query.target)
        })
        .map(|(agent, d)| (d, agent))
        .collect();
    found.sort();
    Ok(found.into_iter().map(|(_, agent)| agent.clone()).collect())
}

/// One report per discovered witness carrying its full history about the
/// target and the requester's current weight for it.
pub fn collect_reports(
    graph: &ReferralGraph,
    query: &WitnessQuery,
    ledger: &Ledger,
    weights: &WeightTable,
) -> Result<Vec<WitnessReport>> {
    Ok(discover_witnesses(graph, query, ledger)?
        .into_iter()
        .map(|witness| WitnessReport {
            rating: ledger.aggregate(&witness, &query.target, None),
            weight_at_query: weights.get(&witness),
            about: query.target.clone(),
            witness,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::{Outcome, RatingEvent};

    fn star(leaves: usize) -> (ReferralGraph, Ledger) {
        let mut graph = ReferralGraph::with_agents(["R", "T"]);
        let mut ledger = Ledger::new();
        for i in 0..leaves {
            let leaf = format!("L{i}");
            graph.add_agent(leaf.as_str());
            graph.add_edge("R", leaf.as_str()).unwrap();
            ledger
                .record(RatingEvent::new(leaf.as_str(), "T", Outcome::Successful, 0))
                .unwrap();
        }
        (graph, ledger)
    }

    #[test]
    fn depth_zero_finds_nothing() {
        let (graph, ledger) = star(5);
        let q = WitnessQuery::new("R", "T", 0).unwrap();
        assert!(discover_witnesses(&graph, &q, &ledger).unwrap().is_empty());
    }

    #[test]
    fn star_leaves_are_witnesses() {
        let (graph, ledger) = star(5);
        let q = WitnessQuery::new("R", "T", 1).unwrap();
        let found = discover_witnesses(&graph, &q, &ledger).unwrap();
        let expected: Vec<AgentId> = (0..5).map(|i| AgentId::from(format!("L{i}"))).collect();
        assert_eq!(found, expected);
    }

    #[test]
    fn ordering_is_by_distance_then_id() {
        let mut graph = ReferralGraph::with_agents(["R", "T", "a", "z", "b"]);
        graph.add_edge("R", "z").unwrap();
        graph.add_edge("z", "a").unwrap();
        graph.add_edge("R", "b").unwrap();
        let ledger = Ledger::from_events(
            ["a", "z", "b"].map(|w| RatingEvent::new(w, "T", Outcome::Successful, 0)),
        )
        .unwrap();
        let q = WitnessQuery::new("R", "T", 2).unwrap();
        let found = discover_witnesses(&graph, &q, &ledger).unwrap();
        assert_eq!(found, vec!["b".into(), "z".into(), AgentId::from("a")]);
    }

    #[test]
    fn target_and_irrelevant_agents_are_excluded() {
        let mut graph = ReferralGraph::with_agents(["R", "T", "W", "V"]);
        graph.add_edge("R", "T").unwrap();
        graph.add_edge("R", "W").unwrap();
        graph.add_edge("R", "V").unwrap();
        let ledger = Ledger::from_events([
            RatingEvent::new("W", "T", Outcome::Successful, 0),
            RatingEvent::new("V", "W", Outcome::Successful, 0),
            RatingEvent::new("T", "W", Outcome::Successful, 0),
        ])
        .unwrap();
        let q = WitnessQuery::new("R", "T", 3).unwrap();
        assert_eq!(
            discover_witnesses(&graph, &q, &ledger).unwrap(),
            vec![AgentId::from("W")]
        );
    }

    #[test]
    fn unknown_requester() {
        let (graph, ledger) = star(1);
        let q = WitnessQuery::new("nobody", "T", 1).unwrap();
        assert!(matches!(
            discover_witnesses(&graph, &q, &ledger),
            Err(Error::UnknownAgent(_))
        ));
    }

    #[test]
    fn graph_invariants() {
        let mut graph = ReferralGraph::with_agents(["a", "b"]);
        assert!(graph.add_edge("a", "a").is_err());
        assert!(graph.add_edge("a", "c").is_err());
        assert!(graph.add_edge("c", "a").is_err());
        graph.add_mutual("a", "b").unwrap();
        assert_eq!(graph.edge_count(), 2);
        assert!(WitnessQuery::new("a", "a", 1).is_err());
    }

    #[test]
    fn reports_carry_history_and_weights() {
        let (graph, mut ledger) = star(2);
        ledger
            .record(RatingEvent::new("L0", "T", Outcome::Unsuccessful, 1))
            .unwrap();
        let mut weights = WeightTable::new();
        weights.set("L1", 0.4).unwrap();
        let q = WitnessQuery::new("R", "T", 1).unwrap();
        let reports = collect_reports(&graph, &q, &ledger, &weights).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].rating, crate::RatingVector::new(1, 1));
        assert_eq!(reports[0].weight_at_query, 1.0);
        assert_eq!(reports[1].weight_at_query, 0.4);
        assert!(reports.iter().all(|r| r.about == AgentId::from("T")));
    }
}
