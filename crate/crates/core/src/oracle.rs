//! Value oracles and adaptive-round accounting.
//!
//! An [`Objective`] is the plain set function `f: 2^V -> R+`. Algorithms never
//! call it directly; they go through a [`CountingOracle`], whose only entry
//! points are *batches*. Each batch is one adaptive round: every query in it
//! is fixed before any answer is seen, so the objective is free to evaluate
//! them concurrently. The ledger records one round per batch and one query
//! per set evaluated.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{check_ids, ElementId, ElementSet};

/// Below this many candidates a batch is evaluated on the calling thread.
const PARALLEL_CUTOFF: usize = 512;

/// A normalized set function evaluated set-functionally.
///
/// Implementations must be pure: the value of a set never depends on what was
/// asked before.
pub trait Objective: Send + Sync {
    /// `n`, the size of the ground set.
    fn ground_size(&self) -> usize;

    /// `f(S)` computed from scratch.
    fn value(&self, set: &ElementSet) -> f64;

    /// An incremental evaluator positioned at `base`.
    ///
    /// The default re-evaluates `f` from scratch for every marginal.
    /// Objectives with cheap accumulators override this.
    fn evaluator(&self, base: &ElementSet) -> Box<dyn Evaluator + '_> {
        Box::new(NaiveEvaluator::new(self, base))
    }
}

/// Incremental view of `f` around a current set `S`.
pub trait Evaluator: Send + Sync {
    /// `f(S)`.
    fn value(&self) -> f64;

    /// `f(e | S) = f(S ∪ {e}) - f(S)`; zero when `e ∈ S`.
    fn gain(&self, e: ElementId) -> f64;

    /// `S <- S ∪ {e}`.
    fn insert(&mut self, e: ElementId);
}

/// Evaluator that recomputes `f` for every query.
pub struct NaiveEvaluator<'a, O: ?Sized> {
    objective: &'a O,
    set: ElementSet,
    value: f64,
}

impl<'a, O: Objective + ?Sized> NaiveEvaluator<'a, O> {
    pub fn new(objective: &'a O, base: &ElementSet) -> Self {
        NaiveEvaluator {
            objective,
            set: base.clone(),
            value: objective.value(base),
        }
    }
}

impl<O: Objective + ?Sized> Evaluator for NaiveEvaluator<'_, O> {
    fn value(&self) -> f64 {
        self.value
    }

    fn gain(&self, e: ElementId) -> f64 {
        if self.set.contains(e) {
            return 0.0;
        }
        let mut extended = self.set.clone();
        extended.insert(e);
        self.objective.value(&extended) - self.value
    }

    fn insert(&mut self, e: ElementId) {
        if self.set.insert(e) {
            self.value = self.objective.value(&self.set);
        }
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        (**self).value(set)
    }

    fn evaluator(&self, base: &ElementSet) -> Box<dyn Evaluator + '_> {
        (**self).evaluator(base)
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        (**self).value(set)
    }

    fn evaluator(&self, base: &ElementSet) -> Box<dyn Evaluator + '_> {
        (**self).evaluator(base)
    }
}

/// Snapshot of the query and adaptive-round counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryLedger {
    pub total_queries: u64,
    pub adaptive_rounds: u64,
}

impl QueryLedger {
    /// Counter growth between `earlier` and `self`.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        QueryLedger {
            total_queries: self.total_queries - earlier.total_queries,
            adaptive_rounds: self.adaptive_rounds - earlier.adaptive_rounds,
        }
    }
}

impl std::ops::Add for QueryLedger {
    type Output = QueryLedger;

    fn add(self, rhs: Self) -> Self {
        QueryLedger {
            total_queries: self.total_queries + rhs.total_queries,
            adaptive_rounds: self.adaptive_rounds + rhs.adaptive_rounds,
        }
    }
}

/// Marginals of a shared candidate list at one level of a chain batch.
#[derive(Clone, Debug)]
pub struct ChainLevel {
    /// `f(G_i)` for the level's base set `G_i`.
    pub base_value: f64,
    /// `f(u | G_i)` aligned with the candidate list. `None` for candidates the
    /// caller excluded at this level; members of `G_i` report `Some(0.0)`
    /// without costing a query.
    pub gains: Vec<Option<f64>>,
}

/// Wraps an objective and counts every query and every adaptive round.
pub struct CountingOracle<'a> {
    objective: &'a dyn Objective,
    queries: AtomicU64,
    rounds: AtomicU64,
}

impl<'a> CountingOracle<'a> {
    pub fn new(objective: &'a dyn Objective) -> Self {
        CountingOracle {
            objective,
            queries: AtomicU64::new(0),
            rounds: AtomicU64::new(0),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.objective.ground_size()
    }

    pub fn objective(&self) -> &'a dyn Objective {
        self.objective
    }

    pub fn ledger(&self) -> QueryLedger {
        QueryLedger {
            total_queries: self.queries.load(Ordering::SeqCst),
            adaptive_rounds: self.rounds.load(Ordering::SeqCst),
        }
    }

    fn record_round(&self, queries: u64) {
        self.queries.fetch_add(queries, Ordering::SeqCst);
        self.rounds.fetch_add(1, Ordering::SeqCst);
    }

    /// `f(S)` as a one-query round.
    pub fn evaluate(&self, set: &ElementSet) -> Result<f64> {
        check_ids(set.iter(), self.ground_size())?;
        let value = self.objective.value(set);
        self.record_round(1);
        Ok(value)
    }

    /// `f` on every set, in order, as a single round.
    pub fn evaluate_batch(&self, sets: &[ElementSet]) -> Result<Vec<f64>> {
        if sets.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let n = self.ground_size();
        for set in sets {
            check_ids(set.iter(), n)?;
        }
        let values = if sets.len() > 1 {
            sets.par_iter().map(|s| self.objective.value(s)).collect()
        } else {
            vec![self.objective.value(&sets[0])]
        };
        self.record_round(sets.len() as u64);
        Ok(values)
    }

    /// `f(e | base)` for each candidate in one round (`|candidates| + 1` queries).
    pub fn marginal_batch(&self, base: &ElementSet, candidates: &[ElementId]) -> Result<Vec<f64>> {
        let mut levels = self.chain_marginals(base, &[], candidates, |_, _| true)?;
        let level = levels.pop().expect("one level");
        Ok(level
            .gains
            .into_iter()
            .map(|g| g.expect("all candidates included"))
            .collect())
    }

    /// Marginals of `candidates` against every prefix of a fixed chain, as one
    /// round.
    ///
    /// Level `i` has base `G_i = base ∪ {chain[0], .., chain[i-1]}` for
    /// `i = 0..=chain.len()`. Each level costs one query for `f(G_i)` plus one
    /// per included candidate outside `G_i`. The whole chain and the inclusion
    /// rule are fixed before any value is computed, so every query is
    /// independent of every answer.
    pub fn chain_marginals<F>(
        &self,
        base: &ElementSet,
        chain: &[ElementId],
        candidates: &[ElementId],
        include: F,
    ) -> Result<Vec<ChainLevel>>
    where
        F: Fn(usize, ElementId) -> bool + Sync,
    {
        let n = self.ground_size();
        check_ids(base.iter(), n)?;
        check_ids(chain.iter().copied(), n)?;
        check_ids(candidates.iter().copied(), n)?;

        let mut members = base.clone();
        let mut evaluator = self.objective.evaluator(base);
        let mut levels = Vec::with_capacity(chain.len() + 1);
        let mut queries = 0u64;
        for level in 0..=chain.len() {
            let eval = &*evaluator;
            let members_ref = &members;
            let include_ref = &include;
            let gain_of = |&u: &ElementId| -> Option<f64> {
                if members_ref.contains(u) {
                    Some(0.0)
                } else if include_ref(level, u) {
                    Some(eval.gain(u))
                } else {
                    None
                }
            };
            let gains: Vec<Option<f64>> = if candidates.len() >= PARALLEL_CUTOFF {
                candidates.par_iter().map(gain_of).collect()
            } else {
                candidates.iter().map(gain_of).collect()
            };
            queries += 1 + candidates
                .iter()
                .zip(&gains)
                .filter(|(u, g)| g.is_some() && !members.contains(**u))
                .count() as u64;
            levels.push(ChainLevel {
                base_value: evaluator.value(),
                gains,
            });
            if let Some(&next) = chain.get(level) {
                if members.insert(next) {
                    evaluator.insert(next);
                }
            }
        }
        self.record_round(queries);
        Ok(levels)
    }
}
