//! Initial estimate of the optimum and the threshold grid derived from it.
//!
//! AST needs one feasible set `S0` with `β·OPT ≤ f(S0) ≤ OPT` to anchor its
//! geometric grid of density thresholds. Any routine producing such a set can
//! be plugged in through [`OptEstimator`].

use crate::baselines::greedy_with_singleton;
use crate::error::{Error, Result};
use crate::instance::{ElementId, ElementSet, KnapsackInstance};
use crate::oracle::CountingOracle;

#[derive(Clone, Debug)]
pub struct OptEstimate {
    pub s0: ElementSet,
    /// `f(s0)`.
    pub value: f64,
    /// Factor `β` the caller assumes: `β·OPT ≤ value ≤ OPT`.
    pub assumed_factor: f64,
}

/// Produces the anchor set `S0`.
pub trait OptEstimator {
    fn estimate(&self, oracle: &CountingOracle, instance: &KnapsackInstance) -> Result<OptEstimate>;
}

/// Density greedy, or the best feasible singleton when that is better.
#[derive(Clone, Copy, Debug)]
pub struct GreedyEstimator {
    pub assumed_factor: f64,
}

/// The best feasible singleton alone: one adaptive round.
#[derive(Clone, Copy, Debug)]
pub struct SingletonEstimator {
    pub assumed_factor: f64,
}

/// Default `β = 1/8 - δ`.
pub fn default_factor(delta: f64) -> f64 {
    0.125 - delta
}

impl OptEstimator for GreedyEstimator {
    fn estimate(&self, oracle: &CountingOracle, instance: &KnapsackInstance) -> Result<OptEstimate> {
        let greedy = greedy_with_singleton(oracle, instance)?;
        let mut best = OptEstimate {
            s0: greedy.set,
            value: greedy.value,
            assumed_factor: self.assumed_factor,
        };
        if let Some((e, v)) = greedy.best_singleton {
            if v > best.value {
                best.s0 = ElementSet::from_ids([e]);
                best.value = v;
            }
        }
        if best.value <= 0.0 {
            best.s0 = ElementSet::new();
            best.value = 0.0;
        }
        Ok(best)
    }
}

impl OptEstimator for SingletonEstimator {
    fn estimate(&self, oracle: &CountingOracle, instance: &KnapsackInstance) -> Result<OptEstimate> {
        let candidates: Vec<ElementId> = (0..instance.n())
            .map(ElementId)
            .filter(|&e| instance.fits(instance.cost_of(e)))
            .collect();
        let mut best = OptEstimate {
            s0: ElementSet::new(),
            value: 0.0,
            assumed_factor: self.assumed_factor,
        };
        if candidates.is_empty() {
            return Ok(best);
        }
        let gains = oracle.marginal_batch(&ElementSet::new(), &candidates)?;
        for (&e, &g) in candidates.iter().zip(&gains) {
            if g > best.value {
                best.s0 = ElementSet::from_ids([e]);
                best.value = g;
            }
        }
        Ok(best)
    }
}

/// Greedy anchor as a free function.
pub fn estimate_greedy(
    oracle: &CountingOracle,
    instance: &KnapsackInstance,
    assumed_factor: f64,
) -> Result<OptEstimate> {
    GreedyEstimator { assumed_factor }.estimate(oracle, instance)
}

/// The threshold grid: starting density `Γ`, number of guesses `Δ` and count cap `M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GuessGrid {
    pub gamma: f64,
    pub guesses: usize,
    pub max_count: usize,
}

impl GuessGrid {
    /// `Γ(1-ε)^i` for `i = 1..=Δ`.
    pub fn thresholds(&self, epsilon: f64) -> Vec<f64> {
        (1..=self.guesses)
            .map(|i| self.gamma * (1.0 - epsilon).powi(i as i32))
            .collect()
    }
}

/// `Δ = ⌈log_{1/(1-ε)}(8α / (ε²(1-8δ)))⌉ + 1` and `M = ⌈(Δ/2 + 1)/ε²⌉`.
/// Both depend only on the parameters.
pub fn guess_counts(alpha: f64, epsilon: f64, delta: f64) -> Result<(usize, usize)> {
    check_params(alpha, epsilon, delta)?;
    let ratio = 8.0 * alpha / (epsilon * epsilon * (1.0 - 8.0 * delta));
    let guesses = (ratio.ln() / (1.0 / (1.0 - epsilon)).ln()).ceil().max(0.0) as usize + 1;
    let max_count = ((guesses as f64 / 2.0 + 1.0) / (epsilon * epsilon)).ceil() as usize;
    Ok((guesses, max_count))
}

/// `Γ = 8α f(S0) / ((1-8δ) ε B)` together with `Δ` and `M`.
pub fn gamma_and_guesses(
    estimate: &OptEstimate,
    alpha: f64,
    epsilon: f64,
    delta: f64,
    budget: f64,
) -> Result<GuessGrid> {
    if estimate.value.is_nan() || estimate.value <= 0.0 {
        return Err(Error::param("estimate has value 0; the instance is trivial"));
    }
    if budget.is_nan() || budget <= 0.0 {
        return Err(Error::param("budget must be positive"));
    }
    let (guesses, max_count) = guess_counts(alpha, epsilon, delta)?;
    let gamma = 8.0 * alpha * estimate.value / ((1.0 - 8.0 * delta) * epsilon * budget);
    Ok(GuessGrid {
        gamma,
        guesses,
        max_count,
    })
}

fn check_params(alpha: f64, epsilon: f64, delta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(format!("alpha must be positive, got {alpha}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 0.125) {
        return Err(Error::param(format!("delta must lie in (0, 1/8), got {delta}")));
    }
    Ok(())
}
