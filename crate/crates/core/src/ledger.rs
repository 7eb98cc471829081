//! Append-only log of pairwise transaction ratings.
//!
//! The event list is the source of truth. Per-pair cumulative totals are kept
//! alongside it so that both "everything so far" and "everything up to tick
//! t" queries are cheap.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::score::RatingVector;
use crate::AgentId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "S")]
    Successful,
    #[serde(rename = "U")]
    Unsuccessful,
}

impl Outcome {
    pub fn from_success(success: bool) -> Self {
        if success {
            Outcome::Successful
        } else {
            Outcome::Unsuccessful
        }
    }

    fn as_vector(self) -> RatingVector {
        match self {
            Outcome::Successful => RatingVector::new(1, 0),
            Outcome::Unsuccessful => RatingVector::new(0, 1),
        }
    }
}

/// One rating left by `rater` about `ratee` after a transaction at tick `t`.
///
/// Field order matches the on-disk record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatingEvent {
    pub rater: AgentId,
    pub ratee: AgentId,
    pub outcome: Outcome,
    pub t: u64,
}

impl RatingEvent {
    pub fn new(
        rater: impl Into<AgentId>,
        ratee: impl Into<AgentId>,
        outcome: Outcome,
        t: u64,
    ) -> Self {
        RatingEvent {
            rater: rater.into(),
            ratee: ratee.into(),
            outcome,
            t,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct PairHistory {
    ticks: Vec<u64>,
    // cumulative[i] = totals over the first i + 1 events of the pair
    cumulative: Vec<RatingVector>,
}

impl PairHistory {
    fn total(&self) -> RatingVector {
        self.cumulative.last().copied().unwrap_or_default()
    }

    fn up_to(&self, tick: u64) -> RatingVector {
        let n = self.ticks.partition_point(|&t| t <= tick);
        if n == 0 {
            RatingVector::ZERO
        } else {
            self.cumulative[n - 1]
        }
    }
}

type Pair = (AgentId, AgentId);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ledger {
    events: Vec<RatingEvent>,
    pairs: BTreeMap<Pair, PairHistory>,
    raters_by_ratee: BTreeMap<AgentId, BTreeSet<AgentId>>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a ledger by recording `events` in order.
    pub fn from_events(events: impl IntoIterator<Item = RatingEvent>) -> Result<Self> {
        let mut ledger = Ledger::new();
        for event in events {
            ledger.record(event)?;
        }
        Ok(ledger)
    }

    pub fn events(&self) -> &[RatingEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Running totals per `(rater, ratee)` pair.
    pub fn index(&self) -> impl Iterator<Item = (&AgentId, &AgentId, RatingVector)> {
        self.pairs.iter().map(|((a, b), h)| (a, b, h.total()))
    }

    /// Agents holding at least one rating about `ratee`.
    pub fn raters_of(&self, ratee: &AgentId) -> impl Iterator<Item = &AgentId> {
        self.raters_by_ratee.get(ratee).into_iter().flatten()
    }

    pub fn has_rated(&self, rater: &AgentId, ratee: &AgentId) -> bool {
        self.raters_by_ratee
            .get(ratee)
            .is_some_and(|raters| raters.contains(rater))
    }

    pub fn record(&mut self, event: RatingEvent) -> Result<()> {
        if event.rater == event.ratee {
            return Err(Error::SelfRating(event.rater));
        }
        let key = (event.rater.clone(), event.ratee.clone());
        let history = self.pairs.entry(key).or_default();
        if let Some(&last) = history.ticks.last() {
            if event.t < last {
                return Err(Error::TimestampRegression {
                    rater: event.rater,
                    ratee: event.ratee,
                    last,
                    got: event.t,
                });
            }
        }
        let total = history.total() + event.outcome.as_vector();
        history.ticks.push(event.t);
        history.cumulative.push(total);
        self.raters_by_ratee
            .entry(event.ratee.clone())
            .or_default()
            .insert(event.rater.clone());
        self.events.push(event);
        Ok(())
    }

    /// What `rater` has recorded about `ratee`, optionally restricted to
    /// events at or before `up_to_tick`. Unknown pairs yield `[0, 0]`.
    pub fn aggregate(
        &self,
        rater: &AgentId,
        ratee: &AgentId,
        up_to_tick: Option<u64>,
    ) -> RatingVector {
        let Some(history) = self.pairs.get(&(rater.clone(), ratee.clone())) else {
            return RatingVector::ZERO;
        };
        match up_to_tick {
            Some(tick) => history.up_to(tick),
            None => history.total(),
        }
    }

    /// Everything recorded about `ratee` by anyone.
    pub fn received(&self, ratee: &AgentId) -> RatingVector {
        self.raters_of(ratee)
            .map(|rater| self.aggregate(rater, ratee, None))
            .sum()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for event in &self.events {
            serde_json::to_writer(&mut out, event)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: Read>(input: R) -> Result<Self> {
        let mut ledger = Ledger::new();
        for (n, line) in BufReader::new(input).lines().enumerate() {
            let line = line?;
            let lineno = n + 1;
            if line.trim().is_empty() {
                continue;
            }
            let event: RatingEvent = serde_json::from_str(&line).map_err(|e| Error::Malformed {
                line: lineno,
                message: e.to_string(),
            })?;
            ledger.record(event).map_err(|e| Error::Malformed {
                line: lineno,
                message: e.to_string(),
            })?;
        }
        Ok(ledger)
    }

    pub fn save(&self, destination: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(destination)?);
        self.write_jsonl(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn load(source: impl AsRef<Path>) -> Result<Self> {
        Self::read_jsonl(File::open(source)?)
    }
}

/// Componentwise sum of rating vectors; `[0, 0]` for an empty list.
pub fn pooled_aggregate<'a>(vectors: impl IntoIterator<Item = &'a RatingVector>) -> RatingVector {
    vectors.into_iter().sum()
}
