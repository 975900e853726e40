//! Randomized batch threshold sampling.
//!
//! [`rand_batch`] selects elements whose marginal density (gain per unit
//! cost) clears a threshold `ρ`, adding a whole random prefix of candidates per
//! adaptive round instead of one element at a time. Each round draws a random
//! budget-feasible ordering of the surviving candidates ([`get_seq`]), queries
//! every candidate's marginal against every prefix of that ordering in one
//! batch, and keeps the longest prefix before either
//!
//! * the mass of still-good candidates has dropped by a `(1 - ε)` factor
//!   (`t1`), or
//! * the negative marginals seen so far outweigh an `ε` share of the positive
//!   mass (`t2`).
//!
//! `t2` firing counts towards the cap `M`; the loop ends once no candidate
//! clears the threshold or the cap is reached.
//!
//! The function being maximized is `g(S) = f(C ∪ S) - f(C)` for a
//! conditioning set `C`, with every feasibility check made against the
//! residual budget `B - c(C)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{ElementId, ElementSet, KnapsackInstance};
use crate::oracle::{ChainLevel, CountingOracle};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandBatchParams {
    /// Density threshold `ρ`.
    pub threshold: f64,
    /// Cap `M` on the number of `t2`-terminated rounds.
    pub max_count: usize,
    /// Acceptance probability of each drawn prefix.
    pub p: f64,
    pub epsilon: f64,
}

impl RandBatchParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::param(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        if self.max_count < 1 {
            return Err(Error::param("count cap M must be at least 1"));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::param(format!("p must lie in (0, 1], got {}", self.p)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::param(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// The `(A, U, L)` triple.
#[derive(Clone, Debug, Default)]
pub struct RandBatchOutput {
    /// `A`: accepted elements in selection order.
    pub accepted: ElementSet,
    /// `U`: every element that was part of a kept prefix, accepted or not.
    pub offered: ElementSet,
    /// `L`: candidates still above the threshold on exit.
    pub remaining: ElementSet,
    /// Number of `t2`-terminated accepted rounds.
    pub count: usize,
    /// Sampling rounds after the initial filter.
    pub iterations: usize,
}

/// Random maximal feasible ordering of `pool`.
///
/// Elements are drawn uniformly without replacement; after each draw, pool
/// members that no longer fit next to `current`, the sequence so far and the
/// conditioning cost are dropped.
pub fn get_seq<R: Rng + ?Sized>(
    current: &ElementSet,
    pool: &[ElementId],
    instance: &KnapsackInstance,
    external_cost: f64,
    rng: &mut R,
) -> Vec<ElementId> {
    let mut used = external_cost + instance.cost(current);
    let mut open: Vec<ElementId> = pool
        .iter()
        .copied()
        .filter(|&e| !current.contains(e) && instance.fits(used + instance.cost_of(e)))
        .collect();
    let mut seq = Vec::with_capacity(open.len());
    while !open.is_empty() {
        let pick = open.remove(rng.random_range(0..open.len()));
        used += instance.cost_of(pick);
        seq.push(pick);
        open.retain(|&e| instance.fits(used + instance.cost_of(e)));
    }
    seq
}

/// Per-level statistics over the chain of prefixes `G_i = A ∪ {v_1..v_i}`.
struct LevelScan {
    t1: usize,
    t2: usize,
}

fn scan_levels(
    levels: &[ChainLevel],
    survivors: &[ElementId],
    seq: &[ElementId],
    instance: &KnapsackInstance,
    used_before: f64,
    params: &RandBatchParams,
) -> LevelScan {
    let d = seq.len();
    let survivor_cost: f64 = survivors.iter().map(|&u| instance.cost_of(u)).sum();
    let position: std::collections::HashMap<ElementId, usize> =
        survivors.iter().enumerate().map(|(i, &u)| (u, i)).collect();

    let mut t1 = None;
    let mut t2 = None;
    let mut prefix_cost = 0.0;
    // Σ |f(v_j | A ∪ V_{j-1})| over the negative prefix steps so far.
    let mut negative_steps = 0.0;
    for (i, level) in levels.iter().enumerate() {
        if i > 0 {
            let v = seq[i - 1];
            prefix_cost += instance.cost_of(v);
            let step = levels[i - 1].gains[position[&v]].expect("prefix element was queried");
            if step < 0.0 {
                negative_steps += -step;
            }
        }
        let mut good_cost = 0.0;
        let mut good_gain = 0.0;
        let mut bad_gain = 0.0;
        for (&u, gain) in survivors.iter().zip(&level.gains) {
            let Some(g) = *gain else { continue };
            let c = instance.cost_of(u);
            if g / c >= params.threshold && instance.fits(used_before + prefix_cost + c) {
                good_cost += c;
                good_gain += g;
            } else if g < 0.0 {
                bad_gain += -g;
            }
        }
        if t1.is_none() && good_cost <= (1.0 - params.epsilon) * survivor_cost {
            t1 = Some(i);
        }
        if t2.is_none() && params.epsilon * good_gain <= bad_gain + negative_steps {
            t2 = Some(i);
        }
        if t1.is_some() && t2.is_some() {
            break;
        }
    }
    LevelScan {
        t1: t1.unwrap_or(d),
        t2: t2.unwrap_or(d),
    }
}

/// Threshold sampling of `pool` for `g(·) = f(conditioning ∪ ·) - f(conditioning)`.
///
/// Costs one adaptive round for the initial filter plus one per sampling
/// round; the refilter after each round reuses that round's marginals.
pub fn rand_batch<R: Rng + ?Sized>(
    oracle: &CountingOracle,
    pool: &[ElementId],
    params: &RandBatchParams,
    instance: &KnapsackInstance,
    conditioning: &ElementSet,
    rng: &mut R,
) -> Result<RandBatchOutput> {
    params.validate()?;
    if instance.n() != oracle.ground_size() {
        return Err(Error::param("instance and oracle disagree on the ground set size"));
    }
    let external_cost = instance.cost(conditioning);
    let density_ok = |u: ElementId, gain: f64| gain / instance.cost_of(u) >= params.threshold;

    let mut out = RandBatchOutput::default();
    let mut accepted_cost = 0.0;
    // Base of every query: conditioning ∪ A.
    let mut base = conditioning.clone();

    let affordable: Vec<ElementId> = pool
        .iter()
        .copied()
        .filter(|&u| !base.contains(u) && instance.fits(external_cost + instance.cost_of(u)))
        .collect();
    let gains = oracle.marginal_batch(&base, &affordable)?;
    let mut survivors: Vec<ElementId> = affordable
        .iter()
        .zip(&gains)
        .filter(|&(&u, &g)| density_ok(u, g))
        .map(|(&u, _)| u)
        .collect();

    while !survivors.is_empty() && out.count < params.max_count {
        out.iterations += 1;
        let seq = get_seq(&out.accepted, &survivors, instance, external_cost, rng);
        let used_before = external_cost + accepted_cost;
        let levels = oracle.chain_marginals(&base, &seq, &survivors, |_, _| true)?;
        let scan = scan_levels(&levels, &survivors, &seq, instance, used_before, params);
        let t_star = scan.t1.min(scan.t2);
        let kept = &seq[..t_star];
        out.offered.extend_from(kept.iter().copied());

        let reference = if params.p >= 1.0 || rng.random_bool(params.p) {
            for &v in kept {
                out.accepted.insert(v);
                base.insert(v);
                accepted_cost += instance.cost_of(v);
            }
            if scan.t2 <= scan.t1 {
                out.count += 1;
            }
            &levels[t_star]
        } else {
            &levels[0]
        };

        let used = external_cost + accepted_cost;
        survivors = survivors
            .iter()
            .zip(&reference.gains)
            .filter(|&(&u, g)| {
                !out.offered.contains(u)
                    && density_ok(u, g.expect("all survivors queried"))
                    && instance.fits(used + instance.cost_of(u))
            })
            .map(|(&u, _)| u)
            .collect();
    }
    out.remaining = survivors.into_iter().collect();
    Ok(out)
}
