use crate::error::{Error, Result};
use crate::instance::{ElementId, ElementSet};
use crate::oracle::{Evaluator, Objective};

use super::WeightedGraph;

/// Revenue `f(S) = Σ_{v ∉ S} sqrt(Σ_{u ∈ S} w(u, v))`.
#[derive(Clone, Debug)]
pub struct RevenueObjective {
    graph: WeightedGraph,
}

impl RevenueObjective {
    pub fn new(graph: WeightedGraph) -> Self {
        RevenueObjective { graph }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }
}

impl Objective for RevenueObjective {
    fn ground_size(&self) -> usize {
        self.graph.node_count()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        let mut influence = vec![0.0; self.graph.node_count()];
        for &(u, v, w) in self.graph.edges() {
            if set.contains(u) {
                influence[v.index()] += w;
            }
            if set.contains(v) {
                influence[u.index()] += w;
            }
        }
        influence
            .iter()
            .enumerate()
            .filter(|&(v, _)| !set.contains(ElementId(v)))
            .map(|(_, s)| s.sqrt())
            .sum()
    }

    fn evaluator(&self, base: &ElementSet) -> Box<dyn Evaluator + '_> {
        let mut eval = RevenueEvaluator {
            graph: &self.graph,
            inside: vec![false; self.graph.node_count()],
            influence: vec![0.0; self.graph.node_count()],
            value: 0.0,
        };
        for e in base {
            eval.insert(e);
        }
        Box::new(eval)
    }
}

struct RevenueEvaluator<'a> {
    graph: &'a WeightedGraph,
    inside: Vec<bool>,
    /// `Σ_{u ∈ S} w(u, v)` for every node `v`.
    influence: Vec<f64>,
    value: f64,
}

impl Evaluator for RevenueEvaluator<'_> {
    fn value(&self) -> f64 {
        self.value
    }

    fn gain(&self, e: ElementId) -> f64 {
        let u = e.index();
        if self.inside[u] {
            return 0.0;
        }
        let mut gain = -self.influence[u].sqrt();
        for (v, w) in self.graph.neighbors(e) {
            if !self.inside[v] {
                let s = self.influence[v];
                gain += (s + w).sqrt() - s.sqrt();
            }
        }
        gain
    }

    fn insert(&mut self, e: ElementId) {
        if self.inside[e.index()] {
            return;
        }
        self.value += self.gain(e);
        self.inside[e.index()] = true;
        for (v, w) in self.graph.neighbors(e) {
            self.influence[v] += w;
        }
    }
}

/// How node costs are derived from weighted degree `s = Σ_v w(u, v)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RevenueCostRule {
    /// `1 - exp(-sqrt(s))`, in `[0, 1)`.
    #[default]
    OneMinusExpNeg,
    /// `exp(sqrt(s)) - 1`, unbounded.
    ExpMinusOne,
}

/// Node costs for the revenue objective, floored at `floor` so isolated
/// nodes still have positive cost.
pub fn revenue_costs(graph: &WeightedGraph, rule: RevenueCostRule, floor: f64) -> Result<Vec<f64>> {
    if !(floor.is_finite() && floor > 0.0) {
        return Err(Error::param(format!("cost floor must be positive, got {floor}")));
    }
    Ok((0..graph.node_count())
        .map(|u| {
            let root = graph.weighted_degree(ElementId(u)).sqrt();
            let raw = match rule {
                RevenueCostRule::OneMinusExpNeg => -(-root).exp_m1(),
                RevenueCostRule::ExpMinusOne => root.exp_m1(),
            };
            raw.max(floor)
        })
        .collect())
}

pub const DEFAULT_COST_FLOOR: f64 = 1e-6;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_example() {
        let star = RevenueObjective::new(
            WeightedGraph::new(4, vec![(0, 1, 1.0), (0, 2, 4.0), (0, 3, 9.0)]).unwrap(),
        );
        assert_eq!(star.value(&ElementSet::new()), 0.0);
        assert_eq!(star.value(&ElementSet::from_ids([0usize])), 6.0);
        assert_eq!(star.value(&ElementSet::full(4)), 0.0);
        let ev = star.evaluator(&ElementSet::new());
        assert_eq!(ev.gain(ElementId(0)), 6.0);
    }

    #[test]
    fn cost_rules() {
        let g = WeightedGraph::new(3, vec![(0, 1, 1.0)]).unwrap();
        let costs = revenue_costs(&g, RevenueCostRule::default(), DEFAULT_COST_FLOOR).unwrap();
        assert!((costs[0] - 0.632_120_558_828_557_7).abs() < 1e-15);
        assert_eq!(costs[2], 1e-6);

        let alt = revenue_costs(&g, RevenueCostRule::ExpMinusOne, DEFAULT_COST_FLOOR).unwrap();
        assert!((alt[0] - (1f64.exp() - 1.0)).abs() < 1e-15);
        assert_eq!(alt[2], 1e-6);

        assert!(revenue_costs(&g, RevenueCostRule::default(), 0.0).is_err());
    }

    #[test]
    fn costs_positive_on_random_graph() {
        let g = super::super::gen_erdos_renyi(50, 0.1, 9).unwrap().graph;
        let costs = revenue_costs(&g, RevenueCostRule::default(), DEFAULT_COST_FLOOR).unwrap();
        assert!(costs.iter().all(|&c| c > 0.0));
    }
}
