//! Unconstrained submodular maximization by uniform random subsets.
//!
//! A uniformly random subset (each element kept with probability 1/2) is a
//! 1/4-approximation in expectation for any non-negative submodular function.
//! We draw several such subsets, add `∅` and the whole ground set, and keep
//! the best, all in a single adaptive round.

use rand::Rng;

use crate::error::Result;
use crate::instance::ElementSet;
use crate::oracle::CountingOracle;

#[derive(Clone, Debug)]
pub struct UnSubMaxResult {
    pub set: ElementSet,
    pub value: f64,
}

/// Best of `samples` random subsets of `ground`, `ground` itself and `∅`.
///
/// Issues exactly one batch of `samples + 2` queries. An empty ground set
/// returns `∅` without querying.
pub fn unsub_max<R: Rng + ?Sized>(
    oracle: &CountingOracle,
    ground: &ElementSet,
    samples: usize,
    rng: &mut R,
) -> Result<UnSubMaxResult> {
    if ground.is_empty() {
        return Ok(UnSubMaxResult {
            set: ElementSet::new(),
            value: 0.0,
        });
    }
    let mut batch = Vec::with_capacity(samples + 2);
    batch.push(ground.clone());
    for _ in 0..samples {
        batch.push(ground.iter().filter(|_| rng.random_bool(0.5)).collect());
    }
    batch.push(ElementSet::new());
    let values = oracle.evaluate_batch(&batch)?;
    let (best, value) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
    Ok(UnSubMaxResult {
        set: batch.swap_remove(best),
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{CutObjective, Modular, WeightedGraph};
    use crate::oracle::Objective;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_ground() {
        let f = Modular::new(vec![1.0]).unwrap();
        let oracle = CountingOracle::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = unsub_max(&oracle, &ElementSet::new(), 10, &mut rng).unwrap();
        assert!(r.set.is_empty());
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn modular_returns_ground() {
        let f = Modular::new(vec![1.0, 0.5, 2.0, 0.25]).unwrap();
        let oracle = CountingOracle::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ground = ElementSet::full(4);
        let r = unsub_max(&oracle, &ground, 10, &mut rng).unwrap();
        assert!(r.set.same_members(&ground));
        assert_eq!(r.value, 3.75);
        let ledger = oracle.ledger();
        assert_eq!(ledger.adaptive_rounds, 1);
        assert_eq!(ledger.total_queries, 12);
    }

    #[test]
    fn never_below_empty_or_ground() {
        let f = CutObjective::new(
            WeightedGraph::new(4, vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5)]).unwrap(),
        );
        for seed in 0..50 {
            let oracle = CountingOracle::new(&f);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ground = ElementSet::from_ids([0usize, 2]);
            let r = unsub_max(&oracle, &ground, 1, &mut rng).unwrap();
            assert!(r.value >= f.value(&ground));
            assert!(r.value >= 0.0);
            assert!(r.set.is_subset(&ground));
            assert_eq!(r.value, f.value(&r.set));
        }
    }
}
