//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trustnet_core::{AgentId, Outcome, RatingEvent, RatingVector, ReferralGraph};

/// Scan-and-count over the raw event list.
pub fn brute_force_aggregate(
    events: &[RatingEvent],
    rater: &AgentId,
    ratee: &AgentId,
    up_to: Option<u64>,
) -> RatingVector {
    let (mut s, mut u) = (0, 0);
    for e in events {
        if &e.rater == rater && &e.ratee == ratee && up_to.is_none_or(|t| e.t <= t) {
            match e.outcome {
                Outcome::Successful => s += 1,
                Outcome::Unsuccessful => u += 1,
            }
        }
    }
    RatingVector::new(s, u)
}

/// All-pairs shortest hop counts by Floyd-Warshall over an adjacency matrix.
pub fn all_pairs_hops(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Option<u32>>> {
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(a, b) in edges {
        d[a][b] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|cur| x + y < cur) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

pub fn node(i: usize) -> AgentId {
    AgentId::from(format!("n{i:02}"))
}

/// A random directed graph on `n` nodes plus a random set of nodes that have
/// rated node `target`.
pub struct RandomSociety {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub raters: BTreeSet<usize>,
    pub target: usize,
    pub requester: usize,
}

impl RandomSociety {
    pub fn generate(rng: &mut impl Rng, max_nodes: usize) -> Self {
        let n = rng.random_range(2..=max_nodes);
        let density: f64 = rng.random_range(0.05..0.5);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && rng.random_bool(density) {
                    edges.push((a, b));
                }
            }
        }
        let target = rng.random_range(0..n);
        let mut requester = rng.random_range(0..n);
        while requester == target {
            requester = rng.random_range(0..n);
        }
        let raters = (0..n)
            .filter(|&i| i != target && rng.random_bool(0.6))
            .collect();
        RandomSociety {
            n,
            edges,
            raters,
            target,
            requester,
        }
    }

    pub fn graph(&self) -> ReferralGraph {
        let mut g = ReferralGraph::with_agents((0..self.n).map(node));
        for &(a, b) in &self.edges {
            g.add_edge(node(a), node(b)).unwrap();
        }
        g
    }

    pub fn events(&self) -> Vec<RatingEvent> {
        self.raters
            .iter()
            .map(|&r| RatingEvent::new(node(r), node(self.target), Outcome::Successful, 0))
            .collect()
    }

    /// Witnesses per the shortest-path oracle, ordered by (distance, id).
    pub fn expected_witnesses(&self, depth_limit: u32) -> Vec<AgentId> {
        let hops = all_pairs_hops(self.n, &self.edges);
        let mut found: Vec<(u32, AgentId)> = (0..self.n)
            .filter(|&i| i != self.requester && i != self.target && self.raters.contains(&i))
            .filter_map(|i| hops[self.requester][i].map(|d| (d, i)))
            .filter(|&(d, _)| d <= depth_limit)
            .map(|(d, i)| (d, node(i)))
            .collect();
        found.sort();
        found.into_iter().map(|(_, id)| id).collect()
    }
}

/// Random event log over a handful of agents with non-decreasing ticks.
pub fn random_events(seed: u64, count: usize) -> Vec<RatingEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let agents = ["a", "b", "c", "d"];
    let mut t = 0u64;
    (0..count)
        .filter_map(|_| {
            t += rng.random_range(0..3);
            let rater = agents[rng.random_range(0..agents.len())];
            let ratee = agents[rng.random_range(0..agents.len())];
            (rater != ratee).then(|| {
                RatingEvent::new(rater, ratee, Outcome::from_success(rng.random_bool(0.6)), t)
            })
        })
        .collect()
}

/// ∫₀¹ Beta(α, β) density via p = sin²(x), which turns every grid integrand
/// into a smooth trigonometric polynomial, then the composite midpoint rule.
pub fn integrate_beta_density(pdf: impl Fn(f64) -> f64, panels: usize) -> f64 {
    let h = std::f64::consts::FRAC_PI_2 / panels as f64;
    (0..panels)
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            let (s, c) = x.sin_cos();
            pdf(s * s) * 2.0 * s * c
        })
        .sum::<f64>()
        * h
}
