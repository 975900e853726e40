//! The alternate-threshold algorithm (AST).
//!
//! Phase one splits off the elements that are cheap enough to be free
//! (`c(e) ≤ εB/n`), anchors a geometric grid of density thresholds on an
//! estimate of the optimum, and walks the grid from the top. Odd steps grow
//! `X`, even steps grow `Y`, each with a [`rand_batch`] call over the elements
//! neither set has taken, conditioned on the set being grown. The two sets are
//! therefore disjoint.
//!
//! Phase two builds the candidates: optionally an unconstrained maximizer
//! over `X_1 ∪ V_0` when that set is cheap, and for every prefix `X^i`
//! (`Y^i`) the prefix plus its single best feasible element. All prefix
//! augmentations of one set form one adaptive round. The answer is the best
//! candidate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimator::{
    default_factor, gamma_and_guesses, GreedyEstimator, GuessGrid, OptEstimate, OptEstimator,
    SingletonEstimator,
};
use crate::instance::{ElementId, ElementSet, KnapsackInstance};
use crate::oracle::{CountingOracle, QueryLedger};
use crate::randbatch::{rand_batch, RandBatchParams};
use crate::unsubmax::unsub_max;

/// Which routine anchors the threshold grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EstimatorKind {
    /// Density greedy with a best-singleton fallback (`O(k)` rounds).
    #[default]
    Greedy,
    /// Best feasible singleton (one round).
    Singleton,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AstConfig {
    pub alpha: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Acceptance probability handed to every `rand_batch` call.
    pub p: f64,
    pub seed: u64,
    /// Random subsets drawn by the unconstrained step.
    pub unsubmax_samples: usize,
    pub estimator: EstimatorKind,
}

impl Default for AstConfig {
    fn default() -> Self {
        let epsilon = 0.1;
        AstConfig {
            alpha: 1.0 / 7.0,
            epsilon,
            delta: 0.12,
            p: 1.0,
            seed: 0,
            unsubmax_samples: (1.0 / epsilon).ceil() as usize,
            estimator: EstimatorKind::Greedy,
        }
    }
}

impl AstConfig {
    pub fn with_seed(seed: u64) -> Self {
        AstConfig {
            seed,
            ..AstConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::param(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0 / 7.0) {
            return Err(Error::param(format!(
                "epsilon must lie in (0, 1/7), got {}",
                self.epsilon
            )));
        }
        if !(self.delta > 0.0 && self.delta < 0.125) {
            return Err(Error::param(format!(
                "delta must lie in (0, 1/8), got {}",
                self.delta
            )));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::param(format!("p must lie in (0, 1], got {}", self.p)));
        }
        if self.unsubmax_samples == 0 {
            return Err(Error::param("unsubmax_samples must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateKind {
    /// `X^i ∪ {a_i}` for prefix length `i`.
    XPrime(usize),
    /// `Y^i ∪ {b_i}` for prefix length `i`.
    YPrime(usize),
    X,
    Y,
    S1,
    /// Best feasible singleton, used only when the estimate is zero.
    Singleton,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub kind: CandidateKind,
    pub set: ElementSet,
    pub value: f64,
}

/// Ledger deltas per phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AstLedger {
    pub estimator: QueryLedger,
    pub main_loop: QueryLedger,
    pub unsubmax: QueryLedger,
    /// The two prefix-augmentation rounds.
    pub prefix: QueryLedger,
}

impl AstLedger {
    /// Everything except the estimator.
    pub fn ast_proper(&self) -> QueryLedger {
        self.main_loop + self.unsubmax + self.prefix
    }

    pub fn total(&self) -> QueryLedger {
        self.estimator + self.ast_proper()
    }
}

#[derive(Clone, Debug)]
pub struct AstResult {
    pub solution: ElementSet,
    pub value: f64,
    pub winner: CandidateKind,
    /// Every compared candidate, in comparison order.
    pub candidates: Vec<Candidate>,
    /// Final `X` and `Y`, in insertion order.
    pub x: ElementSet,
    pub y: ElementSet,
    /// `X` after iteration 1 and `Y` after iteration 2.
    pub x1: ElementSet,
    pub y2: ElementSet,
    pub v0: ElementSet,
    pub estimate: OptEstimate,
    /// `None` when the estimate was zero and the main loop was skipped.
    pub grid: Option<GuessGrid>,
    pub s1: Option<Candidate>,
    pub ledger: AstLedger,
}

impl AstResult {
    fn best_of(&self, pick: impl Fn(CandidateKind) -> bool) -> Option<&Candidate> {
        self.candidates
            .iter()
            .filter(|c| pick(c.kind))
            .fold(None, |best: Option<&Candidate>, c| match best {
                Some(b) if b.value >= c.value => Some(b),
                _ => Some(c),
            })
    }

    pub fn best_x_prime(&self) -> Option<&Candidate> {
        self.best_of(|k| matches!(k, CandidateKind::XPrime(_)))
    }

    pub fn best_y_prime(&self) -> Option<&Candidate> {
        self.best_of(|k| matches!(k, CandidateKind::YPrime(_)))
    }
}

/// `V0 = {e : c(e) ≤ εB/n}` and `V1 = V \ V0`, both in id order.
pub fn split_ground(instance: &KnapsackInstance, epsilon: f64) -> (ElementSet, ElementSet) {
    let n = instance.n();
    let cutoff = epsilon * instance.budget() / n as f64;
    let mut v0 = ElementSet::with_ground_size(n);
    let mut v1 = ElementSet::with_ground_size(n);
    for e in (0..n).map(ElementId) {
        if instance.cost_of(e) <= cutoff {
            v0.insert(e);
        } else {
            v1.insert(e);
        }
    }
    (v0, v1)
}

#[derive(Clone, Debug)]
pub struct MainLoopOutput {
    pub x: ElementSet,
    pub y: ElementSet,
    pub x1: ElementSet,
    pub y2: ElementSet,
    /// Threshold used at each iteration.
    pub thresholds: Vec<f64>,
}

/// The alternating threshold loop over `v1`.
pub fn ast_main_loop(
    oracle: &CountingOracle,
    instance: &KnapsackInstance,
    v1: &ElementSet,
    grid: &GuessGrid,
    config: &AstConfig,
    rng: &mut ChaCha8Rng,
) -> Result<MainLoopOutput> {
    if grid.gamma.is_nan() || grid.gamma <= 0.0 {
        return Err(Error::param("Γ must be positive"));
    }
    let mut x = ElementSet::with_ground_size(instance.n());
    let mut y = ElementSet::with_ground_size(instance.n());
    let mut x1 = ElementSet::new();
    let mut y2 = ElementSet::new();
    let mut pool: Vec<ElementId> = v1.iter().collect();
    let thresholds = grid.thresholds(config.epsilon);
    for (i, &threshold) in (1..).zip(&thresholds) {
        let params = RandBatchParams {
            threshold,
            max_count: grid.max_count,
            p: config.p,
            epsilon: config.epsilon,
        };
        let target = if i % 2 == 1 { &mut x } else { &mut y };
        let out = rand_batch(oracle, &pool, &params, instance, target, rng)?;
        target.extend_from(out.accepted.iter());
        let taken = &*target;
        pool.retain(|&e| !taken.contains(e));
        match i {
            1 => x1 = x.clone(),
            2 => y2 = y.clone(),
            _ => {}
        }
    }
    if thresholds.len() < 2 {
        y2 = y.clone();
    }
    Ok(MainLoopOutput {
        x,
        y,
        x1,
        y2,
        thresholds,
    })
}

/// `T^i ∪ {best feasible e}` for every prefix length `i = 1..=|T|`, plus `f(T)`,
/// in one adaptive round.
fn augment_prefixes(
    oracle: &CountingOracle,
    instance: &KnapsackInstance,
    t: &ElementSet,
    kind: fn(usize) -> CandidateKind,
) -> Result<(Vec<Candidate>, f64)> {
    let n = instance.n();
    let all: Vec<ElementId> = (0..n).map(ElementId).collect();
    let mut prefix_cost = Vec::with_capacity(t.len() + 1);
    prefix_cost.push(0.0);
    for e in t {
        prefix_cost.push(prefix_cost.last().unwrap() + instance.cost_of(e));
    }
    let levels = oracle.chain_marginals(&ElementSet::new(), t.as_slice(), &all, |level, e| {
        level >= 1 && instance.fits(prefix_cost[level] + instance.cost_of(e))
    })?;

    let mut candidates = Vec::with_capacity(t.len());
    for (i, level) in levels.iter().enumerate().skip(1) {
        let mut best: Option<(ElementId, f64)> = None;
        for (&e, gain) in all.iter().zip(&level.gains) {
            let Some(g) = *gain else { continue };
            let value = level.base_value + g;
            if best.is_none_or(|(_, v)| value > v) {
                best = Some((e, value));
            }
        }
        // Members of T^i are always feasible augmentations (gain 0), so `best` exists.
        let (e, value) = best.expect("prefix members are feasible");
        let mut set = t.prefix(i);
        set.insert(e);
        candidates.push(Candidate {
            kind: kind(i),
            set,
            value,
        });
    }
    let t_value = levels.last().expect("at least one level").base_value;
    Ok((candidates, t_value))
}

#[derive(Clone, Debug)]
pub struct BoostOutput {
    /// `X'^i`, `Y'^i`, `X`, `Y` and `S1` (if computed), in comparison order.
    pub candidates: Vec<Candidate>,
    pub s1: Option<Candidate>,
    pub unsubmax: QueryLedger,
    pub prefix: QueryLedger,
}

/// Builds every candidate of the second phase.
#[allow(clippy::too_many_arguments)]
pub fn boost_phase(
    oracle: &CountingOracle,
    instance: &KnapsackInstance,
    x: &ElementSet,
    y: &ElementSet,
    x1: &ElementSet,
    v0: &ElementSet,
    config: &AstConfig,
    rng: &mut ChaCha8Rng,
) -> Result<BoostOutput> {
    let start = oracle.ledger();
    let small = x1.union(v0);
    let s1 = if instance.cost(&small) <= config.epsilon * instance.budget() {
        let r = unsub_max(oracle, &small, config.unsubmax_samples, rng)?;
        Some(Candidate {
            kind: CandidateKind::S1,
            set: r.set,
            value: r.value,
        })
    } else {
        None
    };
    let after_unsub = oracle.ledger();

    let (mut candidates, x_value) = augment_prefixes(oracle, instance, x, CandidateKind::XPrime)?;
    let (y_candidates, y_value) = augment_prefixes(oracle, instance, y, CandidateKind::YPrime)?;
    let after_prefix = oracle.ledger();

    candidates.extend(y_candidates);
    candidates.push(Candidate {
        kind: CandidateKind::X,
        set: x.clone(),
        value: x_value,
    });
    candidates.push(Candidate {
        kind: CandidateKind::Y,
        set: y.clone(),
        value: y_value,
    });
    if let Some(s) = &s1 {
        candidates.push(s.clone());
    }
    Ok(BoostOutput {
        candidates,
        s1,
        unsubmax: after_unsub.since(&start),
        prefix: after_prefix.since(&after_unsub),
    })
}

/// First candidate with the largest value.
fn argmax(candidates: &[Candidate]) -> Option<&Candidate> {
    candidates.iter().fold(None, |best: Option<&Candidate>, c| match best {
        Some(b) if b.value >= c.value => Some(b),
        _ => Some(c),
    })
}

/// Runs AST with the estimator selected in `config`.
pub fn ast(oracle: &CountingOracle, instance: &KnapsackInstance, config: &AstConfig) -> Result<AstResult> {
    let beta = default_factor(config.delta);
    match config.estimator {
        EstimatorKind::Greedy => ast_with_estimator(
            oracle,
            instance,
            config,
            &GreedyEstimator {
                assumed_factor: beta,
            },
        ),
        EstimatorKind::Singleton => ast_with_estimator(
            oracle,
            instance,
            config,
            &SingletonEstimator {
                assumed_factor: beta,
            },
        ),
    }
}

pub fn ast_with_estimator(
    oracle: &CountingOracle,
    instance: &KnapsackInstance,
    config: &AstConfig,
    estimator: &dyn OptEstimator,
) -> Result<AstResult> {
    config.validate()?;
    if instance.n() != oracle.ground_size() {
        return Err(Error::param("instance and oracle disagree on the ground set size"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (v0, v1) = split_ground(instance, config.epsilon);

    let start = oracle.ledger();
    let estimate = estimator.estimate(oracle, instance)?;
    let after_estimate = oracle.ledger();
    let mut ledger = AstLedger {
        estimator: after_estimate.since(&start),
        ..AstLedger::default()
    };

    if estimate.value.is_nan() || estimate.value <= 0.0 {
        return trivial(oracle, instance, v0, estimate, ledger);
    }

    let grid = gamma_and_guesses(
        &estimate,
        config.alpha,
        config.epsilon,
        config.delta,
        instance.budget(),
    )?;
    let main = ast_main_loop(oracle, instance, &v1, &grid, config, &mut rng)?;
    ledger.main_loop = oracle.ledger().since(&after_estimate);

    let boost = boost_phase(oracle, instance, &main.x, &main.y, &main.x1, &v0, config, &mut rng)?;
    ledger.unsubmax = boost.unsubmax;
    ledger.prefix = boost.prefix;

    let best = argmax(&boost.candidates).expect("X and Y are always candidates");
    Ok(AstResult {
        solution: best.set.clone(),
        value: best.value,
        winner: best.kind,
        candidates: boost.candidates.clone(),
        x: main.x,
        y: main.y,
        x1: main.x1,
        y2: main.y2,
        v0,
        estimate,
        grid: Some(grid),
        s1: boost.s1,
        ledger,
    })
}

/// Zero estimate: return the best feasible singleton, or `∅` if nothing fits.
fn trivial(
    oracle: &CountingOracle,
    instance: &KnapsackInstance,
    v0: ElementSet,
    estimate: OptEstimate,
    mut ledger: AstLedger,
) -> Result<AstResult> {
    let before = oracle.ledger();
    let feasible: Vec<ElementId> = (0..instance.n())
        .map(ElementId)
        .filter(|&e| instance.fits(instance.cost_of(e)))
        .collect();
    let mut candidates = Vec::new();
    if !feasible.is_empty() {
        let gains = oracle.marginal_batch(&ElementSet::new(), &feasible)?;
        let (e, v) = feasible
            .iter()
            .copied()
            .zip(gains)
            .fold(None, |best: Option<(ElementId, f64)>, (e, g)| match best {
                Some((_, bv)) if bv >= g => best,
                _ => Some((e, g)),
            })
            .expect("non-empty");
        candidates.push(Candidate {
            kind: CandidateKind::Singleton,
            set: ElementSet::from_ids([e]),
            value: v,
        });
    }
    ledger.main_loop = oracle.ledger().since(&before);
    let (solution, value, winner) = match candidates.first() {
        Some(c) => (c.set.clone(), c.value, c.kind),
        None => (ElementSet::new(), 0.0, CandidateKind::X),
    };
    Ok(AstResult {
        solution,
        value,
        winner,
        candidates,
        x: ElementSet::new(),
        y: ElementSet::new(),
        x1: ElementSet::new(),
        y2: ElementSet::new(),
        v0,
        estimate,
        grid: None,
        s1: None,
        ledger,
    })
}
