//! Exact optimum by enumeration and simple comparison baselines.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{ElementId, ElementSet, KnapsackInstance};
use crate::oracle::{CountingOracle, Objective};

/// Largest ground set [`brute_force_opt`] will enumerate.
pub const BRUTE_FORCE_CAP: usize = 24;

#[derive(Clone, Debug)]
pub struct Optimum {
    pub set: ElementSet,
    pub value: f64,
}

/// Exact maximum of `f` over all feasible sets.
///
/// Depth-first over ids in ascending order; a branch stops as soon as the
/// remaining budget is below the cheapest remaining element, since the
/// current set is then its only feasible completion. Evaluates `f` directly,
/// bypassing any query ledger. Ties go to the lexicographically smallest set
/// of sorted ids.
pub fn brute_force_opt(objective: &dyn Objective, instance: &KnapsackInstance) -> Result<Optimum> {
    let n = instance.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if objective.ground_size() != n {
        return Err(Error::param("objective and instance disagree on the ground set size"));
    }
    let mut suffix_min = vec![f64::INFINITY; n + 1];
    for i in (0..n).rev() {
        suffix_min[i] = suffix_min[i + 1].min(instance.costs()[i]);
    }
    let mut search = Search {
        objective,
        instance,
        suffix_min,
        current: Vec::with_capacity(n),
        best: Vec::new(),
        best_value: f64::NEG_INFINITY,
    };
    search.descend(0, 0.0);
    Ok(Optimum {
        set: ElementSet::from_ids(search.best.iter().copied()),
        value: search.best_value,
    })
}

/// Maximum of `f` over all subsets, ignoring costs.
pub fn brute_force_unconstrained(objective: &dyn Objective) -> Result<Optimum> {
    let n = objective.ground_size();
    let instance = KnapsackInstance::new(vec![1.0; n.max(1)], n.max(1) as f64)?;
    if n == 0 {
        return Ok(Optimum {
            set: ElementSet::new(),
            value: 0.0,
        });
    }
    brute_force_opt(objective, &instance)
}

struct Search<'a> {
    objective: &'a dyn Objective,
    instance: &'a KnapsackInstance,
    suffix_min: Vec<f64>,
    current: Vec<ElementId>,
    best: Vec<ElementId>,
    best_value: f64,
}

impl Search<'_> {
    fn descend(&mut self, next: usize, used: f64) {
        let n = self.instance.n();
        if next == n || !self.instance.fits(used + self.suffix_min[next]) {
            let set = ElementSet::from_ids(self.current.iter().copied());
            let value = self.objective.value(&set);
            // `current` is sorted, so slice comparison is lexicographic.
            if value > self.best_value
                || (value == self.best_value && self.current.as_slice() < self.best.as_slice())
            {
                self.best_value = value;
                self.best.clone_from(&self.current);
            }
            return;
        }
        let cost = self.instance.costs()[next];
        if self.instance.fits(used + cost) {
            self.current.push(ElementId(next));
            self.descend(next + 1, used + cost);
            self.current.pop();
        }
        self.descend(next + 1, used);
    }
}

#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    pub set: ElementSet,
    pub value: f64,
    /// Best feasible singleton seen in the first round, if any element fits.
    pub best_singleton: Option<(ElementId, f64)>,
}

/// Density greedy: repeatedly add the feasible element with the largest
/// positive `f(e|S)/c(e)`, one marginal batch per step. Ties go to the lowest id.
pub fn greedy_with_singleton(
    oracle: &CountingOracle,
    instance: &KnapsackInstance,
) -> Result<GreedyOutcome> {
    let mut set = ElementSet::with_ground_size(instance.n());
    let mut used = 0.0;
    let mut value = 0.0;
    let mut best_singleton: Option<(ElementId, f64)> = None;
    loop {
        let candidates: Vec<ElementId> = (0..instance.n())
            .map(ElementId)
            .filter(|&e| !set.contains(e) && instance.fits(used + instance.cost_of(e)))
            .collect();
        if candidates.is_empty() {
            break;
        }
        let gains = oracle.marginal_batch(&set, &candidates)?;
        if set.is_empty() {
            for (&e, &g) in candidates.iter().zip(&gains) {
                if best_singleton.is_none_or(|(_, v)| g > v) {
                    best_singleton = Some((e, g));
                }
            }
        }
        let mut pick: Option<(ElementId, f64, f64)> = None;
        for (&e, &g) in candidates.iter().zip(&gains) {
            let density = g / instance.cost_of(e);
            if g > 0.0 && pick.is_none_or(|(_, d, _)| density > d) {
                pick = Some((e, density, g));
            }
        }
        let Some((e, _, g)) = pick else { break };
        set.insert(e);
        used += instance.cost_of(e);
        value += g;
    }
    Ok(GreedyOutcome {
        set,
        value,
        best_singleton,
    })
}

/// Density greedy as a standalone baseline.
pub fn density_greedy(oracle: &CountingOracle, instance: &KnapsackInstance) -> Result<ElementSet> {
    Ok(greedy_with_singleton(oracle, instance)?.set)
}

/// Random permutation of `V`, keeping each element that still fits.
pub fn random_feasible<R: Rng + ?Sized>(instance: &KnapsackInstance, rng: &mut R) -> ElementSet {
    let mut order: Vec<ElementId> = (0..instance.n()).map(ElementId).collect();
    order.shuffle(rng);
    let mut used = 0.0;
    let mut set = ElementSet::with_ground_size(instance.n());
    for e in order {
        if instance.fits(used + instance.cost_of(e)) {
            used += instance.cost_of(e);
            set.insert(e);
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{gen_erdos_renyi, CutObjective, Modular, WeightedGraph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn modular_321() -> (Modular, KnapsackInstance) {
        (
            Modular::new(vec![3.0, 2.0, 1.0]).unwrap(),
            KnapsackInstance::new(vec![1.0; 3], 2.0).unwrap(),
        )
    }

    /// Plain 2^n enumeration without pruning.
    fn enumerate_all(f: &dyn Objective, inst: &KnapsackInstance) -> f64 {
        let n = inst.n();
        (0u32..1 << n)
            .map(|mask| ElementSet::from_ids((0..n).filter(|i| mask >> i & 1 == 1)))
            .filter(|s| inst.feasible(s))
            .map(|s| f.value(&s))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn brute_force_examples() {
        let (f, inst) = modular_321();
        let opt = brute_force_opt(&f, &inst).unwrap();
        assert_eq!(opt.value, 5.0);
        assert_eq!(opt.set.sorted_ids(), vec![ElementId(0), ElementId(1)]);

        let tight = inst.with_budget(0.5).unwrap();
        let opt = brute_force_opt(&f, &tight).unwrap();
        assert!(opt.set.is_empty());
        assert_eq!(opt.value, 0.0);

        let tri = CutObjective::new(
            WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap(),
        );
        let inst = KnapsackInstance::new(vec![1.0; 3], 3.0).unwrap();
        let opt = brute_force_opt(&tri, &inst).unwrap();
        assert_eq!(opt.value, 2.0);
        // Lexicographically smallest maximizer.
        assert_eq!(opt.set.sorted_ids(), vec![ElementId(0)]);
    }

    #[test]
    fn brute_force_refuses_large_instances() {
        let f = Modular::new(vec![1.0; 25]).unwrap();
        let inst = KnapsackInstance::new(vec![1.0; 25], 3.0).unwrap();
        assert!(matches!(
            brute_force_opt(&f, &inst),
            Err(Error::TooLarge { n: 25, cap: 24 })
        ));
    }

    #[test]
    fn pruned_matches_unpruned_enumeration() {
        for seed in 0..30u64 {
            let n = 6 + (seed % 7) as usize;
            let g = gen_erdos_renyi(n, 0.5, seed).unwrap();
            let total: f64 = g.costs.iter().sum();
            let inst = KnapsackInstance::new(g.costs.clone(), total * (0.2 + 0.1 * (seed % 5) as f64))
                .unwrap();
            let f = CutObjective::new(g.graph);
            let opt = brute_force_opt(&f, &inst).unwrap();
            assert_eq!(opt.value, enumerate_all(&f, &inst), "seed {seed}");
            assert!(inst.feasible(&opt.set));
        }
    }

    #[test]
    fn greedy_examples() {
        let (f, inst) = modular_321();
        let oracle = CountingOracle::new(&f);
        let g = greedy_with_singleton(&oracle, &inst).unwrap();
        assert_eq!(g.set.as_slice(), &[ElementId(0), ElementId(1)]);
        assert_eq!(g.value, 5.0);
        assert_eq!(g.best_singleton, Some((ElementId(0), 3.0)));

        let neg = Modular::new(vec![-1.0, -2.0]).unwrap();
        let inst = KnapsackInstance::new(vec![1.0; 2], 2.0).unwrap();
        assert!(density_greedy(&CountingOracle::new(&neg), &inst).unwrap().is_empty());
    }

    #[test]
    fn greedy_and_random_never_violate_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..1000u64 {
            let n = 5 + (seed % 20) as usize;
            let g = gen_erdos_renyi(n, 0.3, seed).unwrap();
            let frac = 0.05 + 0.9 * rng.random::<f64>();
            let inst = KnapsackInstance::with_budget_fraction(g.costs.clone(), frac).unwrap();
            let f = CutObjective::new(g.graph);
            let s = density_greedy(&CountingOracle::new(&f), &inst).unwrap();
            assert!(inst.feasible(&s));
            assert!(inst.feasible(&random_feasible(&inst, &mut rng)));
        }
    }

    #[test]
    fn random_feasible_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = KnapsackInstance::new(vec![0.5, 1.0, 0.25], 1.75).unwrap();
        assert_eq!(random_feasible(&inst, &mut rng).len(), 3);
        let tight = inst.with_budget(0.2).unwrap();
        assert!(random_feasible(&tight, &mut rng).is_empty());
    }
}
