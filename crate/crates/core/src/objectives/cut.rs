use crate::instance::{ElementId, ElementSet};
use crate::oracle::{Evaluator, Objective};

use super::WeightedGraph;

/// Weighted cut `f(S) = Σ_{u ∉ S} Σ_{v ∈ S} w(u, v)`.
#[derive(Clone, Debug)]
pub struct CutObjective {
    graph: WeightedGraph,
}

impl CutObjective {
    pub fn new(graph: WeightedGraph) -> Self {
        CutObjective { graph }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }
}

impl Objective for CutObjective {
    fn ground_size(&self) -> usize {
        self.graph.node_count()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.graph
            .edges()
            .iter()
            .filter(|&&(u, v, _)| set.contains(u) != set.contains(v))
            .map(|&(_, _, w)| w)
            .sum()
    }

    fn evaluator(&self, base: &ElementSet) -> Box<dyn Evaluator + '_> {
        let mut eval = CutEvaluator {
            graph: &self.graph,
            inside: vec![false; self.graph.node_count()],
            weight_into_set: vec![0.0; self.graph.node_count()],
            value: 0.0,
        };
        for e in base {
            eval.insert(e);
        }
        Box::new(eval)
    }
}

struct CutEvaluator<'a> {
    graph: &'a WeightedGraph,
    inside: Vec<bool>,
    /// `Σ_{v ∈ S} w(u, v)` for every node `u`.
    weight_into_set: Vec<f64>,
    value: f64,
}

impl Evaluator for CutEvaluator<'_> {
    fn value(&self) -> f64 {
        self.value
    }

    fn gain(&self, e: ElementId) -> f64 {
        let u = e.index();
        if self.inside[u] {
            return 0.0;
        }
        // Edges to the outside become cut, edges into S stop being cut.
        self.graph.weighted_degree(e) - 2.0 * self.weight_into_set[u]
    }

    fn insert(&mut self, e: ElementId) {
        if self.inside[e.index()] {
            return;
        }
        self.value += self.gain(e);
        self.inside[e.index()] = true;
        for (v, w) in self.graph.neighbors(e) {
            self.weight_into_set[v] += w;
        }
    }
}
