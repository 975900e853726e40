//! Benchmark objectives: revenue maximization, maximum weighted cut and
//! image summarization, plus modular and mixture functions used in tests.
//!
//! Each objective evaluates `f(S)` from scratch in [`Objective::value`] and
//! provides an incremental [`Evaluator`](crate::oracle::Evaluator) that keeps
//! per-node accumulators, so a marginal costs `O(deg)` (cut, revenue) or
//! `O(n)` (image summarization) instead of a full re-evaluation.

mod cut;
mod graph;
mod image;
mod modular;
mod revenue;

pub use cut::CutObjective;
pub use graph::{
    gen_erdos_renyi, load_edge_list, parse_edge_list, uniform_costs, RandomGraph, WeightedGraph,
};
pub use image::{gen_features, load_features, parse_features, ImageSummarization, SimilarityMatrix};
pub use modular::{Modular, WeightedSum};
pub use revenue::{revenue_costs, RevenueCostRule, RevenueObjective, DEFAULT_COST_FLOOR};
