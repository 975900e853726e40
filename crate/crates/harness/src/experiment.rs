//! Experiment specifications and the trial runner.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use smk_core::ast::{ast, AstConfig};
use smk_core::baselines::{density_greedy, random_feasible};
use smk_core::objectives::{
    gen_erdos_renyi, gen_features, load_edge_list, load_features, revenue_costs, uniform_costs,
    CutObjective, ImageSummarization, RevenueCostRule, RevenueObjective, SimilarityMatrix,
    WeightedGraph, DEFAULT_COST_FLOOR,
};
use smk_core::{CountingOracle, KnapsackInstance, Objective};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Ast,
    DensityGreedy,
    RandomFeasible,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Ast, Algorithm::DensityGreedy, Algorithm::RandomFeasible];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ast => "ast",
            Algorithm::DensityGreedy => "density_greedy",
            Algorithm::RandomFeasible => "random_feasible",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ast" => Ok(Algorithm::Ast),
            "density_greedy" | "greedy" => Ok(Algorithm::DensityGreedy),
            "random_feasible" | "random" => Ok(Algorithm::RandomFeasible),
            other => bail!("unknown algorithm `{other}` (expected ast, density_greedy or random_feasible)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    Revenue,
    Cut,
    ImageSumm,
}

impl ObjectiveKind {
    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::Revenue => "revenue",
            ObjectiveKind::Cut => "cut",
            ObjectiveKind::ImageSumm => "image_summ",
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "revenue" => Ok(ObjectiveKind::Revenue),
            "cut" => Ok(ObjectiveKind::Cut),
            "image_summ" | "image" => Ok(ObjectiveKind::ImageSumm),
            other => bail!("unknown objective `{other}` (expected revenue, cut or image_summ)"),
        }
    }
}

/// Where the instance data comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    /// Erdős–Rényi graph `G(n, p)` for graph objectives; `n` random feature
    /// vectors for image summarization (`p` unused).
    Generate { n: usize, p: f64, seed: u64 },
    /// Edge list for graph objectives, feature CSV for image summarization.
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub algorithm: Algorithm,
    pub objective: ObjectiveKind,
    pub source: Source,
    /// Each budget is this fraction of the total cost of all elements.
    pub budget_fractions: Vec<f64>,
    pub trials: usize,
    pub config: AstConfig,
    pub cost_rule: RevenueCostRule,
    /// Dimension of generated feature vectors.
    pub feature_dim: usize,
    /// Write `wall_ms = 0` so output bytes depend only on the seeds.
    pub deterministic: bool,
}

/// `0.025, 0.05, ..., 0.2`.
pub fn default_budget_fractions() -> Vec<f64> {
    (1..=8).map(|i| i as f64 * 0.025).collect()
}

impl ExperimentSpec {
    pub fn new(algorithm: Algorithm, objective: ObjectiveKind, source: Source) -> Self {
        ExperimentSpec {
            algorithm,
            objective,
            source,
            budget_fractions: default_budget_fractions(),
            trials: 1,
            config: AstConfig::default(),
            cost_rule: RevenueCostRule::default(),
            feature_dim: 64,
            deterministic: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.trials >= 1, "trials must be at least 1");
        ensure!(!self.budget_fractions.is_empty(), "no budget fractions given");
        for &f in &self.budget_fractions {
            ensure!(f > 0.0 && f <= 1.0, "budget fraction {f} outside (0, 1]");
        }
        ensure!(self.feature_dim >= 1, "feature dimension must be at least 1");
        self.config.validate()?;
        Ok(())
    }
}

/// One CSV row: a single trial at a single budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub algorithm: Algorithm,
    pub objective: ObjectiveKind,
    pub n: usize,
    pub budget_fraction: f64,
    #[serde(rename = "B")]
    pub budget: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub trial: usize,
    pub f_value: f64,
    pub total_queries: u64,
    /// Rounds of the algorithm itself; for AST this excludes the estimator.
    pub adaptive_rounds_ast: u64,
    pub adaptive_rounds_estimator: u64,
    pub wall_ms: f64,
}

/// An objective with its element costs.
pub struct Problem {
    pub objective: Box<dyn Objective>,
    pub costs: Vec<f64>,
}

impl Problem {
    pub fn n(&self) -> usize {
        self.costs.len()
    }
}

fn graph_problem(kind: ObjectiveKind, graph: WeightedGraph, costs: Option<Vec<f64>>, spec: &ExperimentSpec, cost_seed: u64) -> Result<Problem> {
    let n = graph.node_count();
    match kind {
        ObjectiveKind::Cut => Ok(Problem {
            costs: costs.unwrap_or_else(|| uniform_costs(n, cost_seed)),
            objective: Box::new(CutObjective::new(graph)),
        }),
        ObjectiveKind::Revenue => Ok(Problem {
            costs: revenue_costs(&graph, spec.cost_rule, DEFAULT_COST_FLOOR)?,
            objective: Box::new(RevenueObjective::new(graph)),
        }),
        ObjectiveKind::ImageSumm => unreachable!("image summarization has no graph"),
    }
}

/// Loads or generates the instance data described by `spec`.
pub fn build_problem(spec: &ExperimentSpec) -> Result<Problem> {
    match (&spec.source, spec.objective) {
        (&Source::Generate { n, seed, .. }, ObjectiveKind::ImageSumm) => {
            let sim = SimilarityMatrix::from_features(&gen_features(n, spec.feature_dim, seed))?;
            Ok(Problem {
                objective: Box::new(ImageSummarization::new(sim)),
                costs: uniform_costs(n, seed ^ 0x5eed),
            })
        }
        (&Source::Generate { n, p, seed }, kind) => {
            let g = gen_erdos_renyi(n, p, seed)?;
            graph_problem(kind, g.graph, Some(g.costs), spec, seed)
        }
        (Source::File(path), ObjectiveKind::ImageSumm) => {
            let sim = load_features(path).with_context(|| format!("loading features from {}", path.display()))?;
            let n = sim.n();
            Ok(Problem {
                objective: Box::new(ImageSummarization::new(sim)),
                costs: uniform_costs(n, spec.config.seed),
            })
        }
        (Source::File(path), kind) => {
            let graph = load_edge_list(path).with_context(|| format!("loading graph from {}", path.display()))?;
            graph_problem(kind, graph, None, spec, spec.config.seed)
        }
    }
}

/// Seed of trial `trial`: the first word of stream `trial` of ChaCha8 keyed by `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng.next_u64()
}

/// Runs every (fraction, trial) pair of `spec`, records in canonical order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRecord>> {
    spec.validate()?;
    let problem = build_problem(spec)?;
    run_on_problem(spec, &problem)
}

/// As [`run_experiment`] with the instance data already built.
pub fn run_on_problem(spec: &ExperimentSpec, problem: &Problem) -> Result<Vec<ExperimentRecord>> {
    spec.validate()?;
    let jobs: Vec<(f64, usize)> = spec
        .budget_fractions
        .iter()
        .flat_map(|&f| (0..spec.trials).map(move |t| (f, t)))
        .collect();
    jobs.par_iter()
        .map(|&(fraction, trial)| run_trial(spec, problem, fraction, trial))
        .collect()
}

fn run_trial(spec: &ExperimentSpec, problem: &Problem, fraction: f64, trial: usize) -> Result<ExperimentRecord> {
    let instance = KnapsackInstance::with_budget_fraction(problem.costs.clone(), fraction)?;
    let objective: &dyn Objective = problem.objective.as_ref();
    let oracle = CountingOracle::new(objective);
    let seed = trial_seed(spec.config.seed, trial);
    let start = Instant::now();
    let (f_value, rounds_ast, rounds_est) = match spec.algorithm {
        Algorithm::Ast => {
            let config = AstConfig {
                seed,
                ..spec.config.clone()
            };
            let res = ast(&oracle, &instance, &config)?;
            (
                res.value,
                res.ledger.ast_proper().adaptive_rounds,
                res.ledger.estimator.adaptive_rounds,
            )
        }
        Algorithm::DensityGreedy => {
            let set = density_greedy(&oracle, &instance)?;
            (objective.value(&set), oracle.ledger().adaptive_rounds, 0)
        }
        Algorithm::RandomFeasible => {
            let set = random_feasible(&instance, &mut ChaCha8Rng::seed_from_u64(seed));
            (objective.value(&set), 0, 0)
        }
    };
    let wall_ms = if spec.deterministic {
        0.0
    } else {
        start.elapsed().as_secs_f64() * 1e3
    };
    Ok(ExperimentRecord {
        algorithm: spec.algorithm,
        objective: spec.objective,
        n: problem.n(),
        budget_fraction: fraction,
        budget: instance.budget(),
        epsilon: spec.config.epsilon,
        delta: spec.config.delta,
        seed: spec.config.seed,
        trial,
        f_value,
        total_queries: oracle.ledger().total_queries,
        adaptive_rounds_ast: rounds_ast,
        adaptive_rounds_estimator: rounds_est,
        wall_ms,
    })
}

/// Every algorithm in `algorithms` on one shared instance.
pub fn run_sweep(spec: &ExperimentSpec, algorithms: &[Algorithm]) -> Result<Vec<ExperimentRecord>> {
    spec.validate()?;
    let problem = build_problem(spec)?;
    let mut out = Vec::new();
    for &algorithm in algorithms {
        let spec = ExperimentSpec {
            algorithm,
            ..spec.clone()
        };
        out.extend(run_on_problem(&spec, &problem)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(algorithm: Algorithm) -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(
            algorithm,
            ObjectiveKind::Cut,
            Source::Generate {
                n: 40,
                p: 0.3,
                seed: 5,
            },
        );
        spec.budget_fractions = vec![0.1, 0.2];
        spec.trials = 3;
        spec.deterministic = true;
        spec
    }

    #[test]
    fn one_record_per_fraction_and_trial() {
        let recs = run_experiment(&small(Algorithm::Ast)).unwrap();
        assert_eq!(recs.len(), 6);
        let keys: Vec<(f64, usize)> = recs.iter().map(|r| (r.budget_fraction, r.trial)).collect();
        assert_eq!(keys, vec![(0.1, 0), (0.1, 1), (0.1, 2), (0.2, 0), (0.2, 1), (0.2, 2)]);
        for r in &recs {
            assert!(r.f_value >= 0.0 && r.adaptive_rounds_ast > 0 && r.adaptive_rounds_estimator > 0);
            assert_eq!(r.wall_ms, 0.0);
        }
    }

    #[test]
    fn ledger_attribution_covers_every_round() {
        let spec = small(Algorithm::Ast);
        let problem = build_problem(&spec).unwrap();
        let inst = KnapsackInstance::with_budget_fraction(problem.costs.clone(), 0.2).unwrap();
        let oracle = CountingOracle::new(problem.objective.as_ref());
        let res = ast(&oracle, &inst, &AstConfig::with_seed(trial_seed(0, 1))).unwrap();
        let rec = &run_on_problem(&spec, &problem).unwrap()[4];
        assert_eq!(
            rec.adaptive_rounds_ast + rec.adaptive_rounds_estimator,
            oracle.ledger().adaptive_rounds
        );
        assert_eq!(rec.f_value, res.value);
        assert_eq!(rec.total_queries, oracle.ledger().total_queries);
    }

    #[test]
    fn baselines_and_objectives_run() {
        for objective in [ObjectiveKind::Revenue, ObjectiveKind::Cut, ObjectiveKind::ImageSumm] {
            for algorithm in Algorithm::ALL {
                let spec = ExperimentSpec {
                    objective,
                    ..small(algorithm)
                };
                let recs = run_experiment(&spec).unwrap();
                assert_eq!(recs.len(), 6, "{algorithm} on {objective}");
                assert!(recs.iter().all(|r| r.f_value.is_finite() && r.budget > 0.0));
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        for o in [ObjectiveKind::Revenue, ObjectiveKind::Cut, ObjectiveKind::ImageSumm] {
            assert_eq!(o.name().parse::<ObjectiveKind>().unwrap(), o);
        }
        assert!("parskp".parse::<Algorithm>().is_err());
    }

    #[test]
    fn bad_specs_are_rejected() {
        let mut spec = small(Algorithm::Ast);
        spec.budget_fractions = vec![0.0];
        assert!(run_experiment(&spec).is_err());
        spec.budget_fractions = vec![0.5];
        spec.trials = 0;
        assert!(run_experiment(&spec).is_err());
        let missing = ExperimentSpec::new(Algorithm::Ast, ObjectiveKind::Cut, Source::File("/nonexistent/g.txt".into()));
        assert!(run_experiment(&missing).is_err());
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(7, 0), trial_seed(7, 1));
        assert_eq!(trial_seed(7, 3), trial_seed(7, 3));
    }
}
