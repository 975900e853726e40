//! Acceptance suites, shared by the `verify` and `bench-rounds` subcommands
//! and by the acceptance test target.
//!
//! Every AST run made by a suite goes through [`checked_ast`], which checks
//! the structural invariants and the two-round prefix phase and records any
//! violation in the suite's [`Tally`].

use std::fmt;

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use smk_core::ast::{ast, AstConfig, AstResult};
use smk_core::baselines::{brute_force_opt, brute_force_unconstrained, density_greedy};
use smk_core::estimator::guess_counts;
use smk_core::objectives::{
    gen_erdos_renyi, gen_features, revenue_costs, uniform_costs, CutObjective, ImageSummarization,
    Modular, RevenueCostRule, RevenueObjective, SimilarityMatrix, WeightedGraph, WeightedSum,
    DEFAULT_COST_FLOOR,
};
use smk_core::randbatch::{rand_batch, RandBatchParams};
use smk_core::unsubmax::unsub_max;
use smk_core::{CountingOracle, ElementId, ElementSet, KnapsackInstance, Objective};

use crate::experiment::trial_seed;
use crate::stats::{linear_fit, LinearFit, Summary};

/// Runs checked and the violations found.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub runs: usize,
    pub violations: Vec<String>,
}

impl Tally {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: Tally) {
        self.runs += other.runs;
        self.violations.extend(other.violations);
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            self.violations.push(what());
        }
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} runs, {} violations", self.runs, self.violations.len())?;
        if let Some(first) = self.violations.first() {
            write!(f, " (first: {first})")?;
        }
        Ok(())
    }
}

/// Invariant and prefix-round tallies of a batch of AST runs.
#[derive(Clone, Debug, Default)]
pub struct RunChecks {
    pub invariants: Tally,
    pub prefix_rounds: Tally,
}

impl RunChecks {
    pub fn merge(&mut self, other: RunChecks) {
        self.invariants.merge(other.invariants);
        self.prefix_rounds.merge(other.prefix_rounds);
    }
}

/// Runs AST on a fresh oracle and checks it.
pub fn checked_ast(
    objective: &dyn Objective,
    instance: &KnapsackInstance,
    config: &AstConfig,
    label: &str,
) -> Result<(AstResult, RunChecks)> {
    let oracle = CountingOracle::new(objective);
    let res = ast(&oracle, instance, config)?;
    let observed = oracle.ledger();
    let mut checks = RunChecks::default();
    let inv = &mut checks.invariants;
    inv.runs = 1;
    let tag = |what: &str| format!("{label} seed {}: {what}", config.seed);

    inv.check(instance.feasible(&res.solution), || tag("solution over budget"));
    inv.check(res.candidates.iter().all(|c| instance.feasible(&c.set)), || tag("infeasible candidate"));
    inv.check(res.x.is_disjoint(&res.y), || tag("X and Y intersect"));
    let best = res.candidates.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
    if res.candidates.is_empty() {
        inv.check(res.value == 0.0 && res.solution.is_empty(), || tag("empty candidate list but non-empty solution"));
    } else {
        inv.check(res.value == best, || tag("value is not the candidate maximum"));
    }
    if res.grid.is_some() {
        let expected = res.x.len() + res.y.len() + 2 + usize::from(res.s1.is_some());
        inv.check(res.candidates.len() == expected, || {
            tag(&format!("{} candidates, expected {expected}", res.candidates.len()))
        });
    }
    let total = res.ledger.total();
    inv.check(total == observed, || tag("phase ledgers do not add up to the oracle ledger"));
    let split = res.ledger.ast_proper().adaptive_rounds + res.ledger.estimator.adaptive_rounds;
    inv.check(split == observed.adaptive_rounds, || tag("estimator and AST rounds do not partition the total"));
    let direct = objective.value(&res.solution);
    inv.check(
        (direct - res.value).abs() <= 1e-9 * direct.abs().max(1.0),
        || tag("reported value differs from f(solution)"),
    );

    if res.grid.is_some() {
        checks.prefix_rounds.runs = 1;
        let rounds = res.ledger.prefix.adaptive_rounds;
        checks
            .prefix_rounds
            .check(rounds == 2, || tag(&format!("prefix phase used {rounds} rounds")));
    }
    Ok((res, checks))
}

/// A small named instance.
pub struct Fixture {
    pub label: String,
    pub objective: Box<dyn Objective>,
    pub instance: KnapsackInstance,
}

pub fn cut_fixture(n: usize, p: f64, fraction: f64, seed: u64) -> Result<Fixture> {
    let g = gen_erdos_renyi(n, p, seed)?;
    Ok(Fixture {
        label: format!("cut n={n} b={fraction}"),
        instance: KnapsackInstance::with_budget_fraction(g.costs, fraction)?,
        objective: Box::new(CutObjective::new(g.graph)),
    })
}

pub fn revenue_fixture(n: usize, p: f64, fraction: f64, seed: u64) -> Result<Fixture> {
    let g = gen_erdos_renyi(n, p, seed)?;
    let costs = revenue_costs(&g.graph, RevenueCostRule::OneMinusExpNeg, DEFAULT_COST_FLOOR)?;
    Ok(Fixture {
        label: format!("revenue n={n} b={fraction}"),
        instance: KnapsackInstance::with_budget_fraction(costs, fraction)?,
        objective: Box::new(RevenueObjective::new(g.graph)),
    })
}

/// Cut plus a non-negative modular term.
pub fn mixture_fixture(n: usize, p: f64, fraction: f64, seed: u64) -> Result<Fixture> {
    let g = gen_erdos_renyi(n, p, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
    let scale = 2.0 * g.graph.edges().iter().map(|e| e.2).sum::<f64>() / n as f64;
    let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * scale).collect();
    let objective = WeightedSum::new(vec![
        (1.0, Box::new(CutObjective::new(g.graph)) as Box<dyn Objective>),
        (0.5, Box::new(Modular::new(weights)?)),
    ])?;
    Ok(Fixture {
        label: format!("mixture n={n} b={fraction}"),
        instance: KnapsackInstance::with_budget_fraction(g.costs, fraction)?,
        objective: Box::new(objective),
    })
}

pub fn image_fixture(n: usize, dim: usize, fraction: f64, seed: u64) -> Result<Fixture> {
    let sim = SimilarityMatrix::from_features(&gen_features(n, dim, seed))?;
    Ok(Fixture {
        label: format!("image n={n} b={fraction}"),
        instance: KnapsackInstance::with_budget_fraction(uniform_costs(n, seed), fraction)?,
        objective: Box::new(ImageSummarization::new(sim)),
    })
}

// ---------------------------------------------------------------------------
// Approximation ratio against brute force.

pub const RATIO_TARGET: f64 = 1.0 / 7.0 - 0.1;

#[derive(Clone, Debug)]
pub struct RatioRow {
    pub label: String,
    pub opt: f64,
    pub ratio: Summary,
}

impl RatioRow {
    pub fn passed(&self) -> bool {
        self.ratio.lower() >= RATIO_TARGET
    }
}

#[derive(Clone, Debug)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    pub checks: RunChecks,
}

impl RatioReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(RatioRow::passed)
    }
}

/// The twelve brute-forceable instances: three objectives at four
/// (n, budget fraction) pairs covering n ∈ {10, 12, 14} and fractions 0.2/0.4/0.6.
pub fn ratio_fixtures(seed: u64) -> Result<Vec<Fixture>> {
    let shapes = [(10, 0.2), (12, 0.4), (14, 0.6), (14, 0.2)];
    let mut out = Vec::new();
    for (k, &(n, frac)) in shapes.iter().enumerate() {
        let s = seed + k as u64;
        out.push(cut_fixture(n, 0.5, frac, s)?);
        out.push(revenue_fixture(n, 0.5, frac, s)?);
        out.push(mixture_fixture(n, 0.5, frac, s)?);
    }
    Ok(out)
}

/// `runs` seeded AST runs per instance, ratio `f(S)/OPT`.
pub fn ratio_suite(runs: usize, seed: u64) -> Result<RatioReport> {
    let mut rows = Vec::new();
    let mut checks = RunChecks::default();
    for fx in ratio_fixtures(seed)? {
        let opt = brute_force_opt(fx.objective.as_ref(), &fx.instance)?;
        let outcomes: Vec<(f64, RunChecks)> = (0..runs)
            .into_par_iter()
            .map(|r| {
                let config = AstConfig::with_seed(trial_seed(seed, r));
                let (res, c) = checked_ast(fx.objective.as_ref(), &fx.instance, &config, &fx.label)?;
                let ratio = if opt.value > 0.0 { res.value / opt.value } else { 1.0 };
                Ok((ratio, c))
            })
            .collect::<Result<_>>()?;
        let ratios: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
        for (_, c) in outcomes {
            checks.merge(c);
        }
        rows.push(RatioRow {
            label: fx.label,
            opt: opt.value,
            ratio: Summary::of(&ratios),
        });
    }
    Ok(RatioReport { rows, checks })
}

// ---------------------------------------------------------------------------
// Threshold sampling in expectation.

/// Statistics of `D = gain - (1-ε)²·θ·cost` over calls or positions.
#[derive(Clone, Debug)]
pub struct ExpectationStat {
    pub samples: usize,
    pub mean_gain: f64,
    pub mean_cost: f64,
    pub excess: Summary,
}

impl ExpectationStat {
    fn from_pairs(pairs: &[(f64, f64)], scale: f64) -> ExpectationStat {
        let n = pairs.len() as f64;
        let d: Vec<f64> = pairs.iter().map(|&(g, c)| g - scale * c).collect();
        ExpectationStat {
            samples: pairs.len(),
            mean_gain: pairs.iter().map(|p| p.0).sum::<f64>() / n,
            mean_cost: pairs.iter().map(|p| p.1).sum::<f64>() / n,
            excess: Summary::of(&d),
        }
    }

    /// `mean gain ≥ (1-ε)²θ·mean cost - slack`.
    pub fn passed(&self) -> bool {
        self.excess.upper() >= 0.0
    }
}

#[derive(Clone, Debug)]
pub struct ThresholdLevel {
    pub theta: f64,
    /// Whole accepted set `A` per call.
    pub set: ExpectationStat,
    /// Position `i` (1-based) with at least [`MIN_POSITION_SAMPLES`] samples.
    pub positions: Vec<(usize, ExpectationStat)>,
}

pub const MIN_POSITION_SAMPLES: usize = 30;

#[derive(Clone, Debug)]
pub struct SamplingReport {
    pub n: usize,
    pub levels: Vec<ThresholdLevel>,
}

impl SamplingReport {
    pub fn sets_passed(&self) -> bool {
        self.levels.iter().all(|l| l.set.passed())
    }

    pub fn positions_passed(&self) -> bool {
        self.levels.iter().all(|l| !l.positions.is_empty() && l.positions.iter().all(|p| p.1.passed()))
    }
}

/// `calls` seeded `rand_batch` runs at each of three thresholds on a fixed
/// n=30 cut instance: the 90th, 70th and 50th percentiles of the feasible
/// singleton densities.
pub fn sampling_suite(calls: usize, seed: u64) -> Result<SamplingReport> {
    let fx = cut_fixture(30, 0.3, 0.3, seed)?;
    let f = fx.objective.as_ref();
    let inst = &fx.instance;
    let eps = 0.1;
    let pool: Vec<ElementId> = (0..inst.n()).map(ElementId).collect();
    let mut densities: Vec<f64> = pool
        .iter()
        .filter(|&&e| inst.fits(inst.cost_of(e)))
        .map(|&e| f.value(&ElementSet::from_ids([e])) / inst.cost_of(e))
        .collect();
    densities.sort_by(f64::total_cmp);
    let (_, max_count) = guess_counts(1.0 / 7.0, eps, 0.12)?;
    let mut levels = Vec::new();
    for q in [0.9, 0.7, 0.5] {
        let theta = densities[((densities.len() - 1) as f64 * q).round() as usize];
        let params = RandBatchParams {
            threshold: theta,
            max_count,
            p: 1.0,
            epsilon: eps,
        };
        let runs: Vec<Vec<(f64, f64)>> = (0..calls)
            .into_par_iter()
            .map(|r| {
                let oracle = CountingOracle::new(f);
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, r));
                let out = rand_batch(&oracle, &pool, &params, inst, &ElementSet::new(), &mut rng)?;
                let mut steps = Vec::with_capacity(out.accepted.len());
                let mut prefix = ElementSet::new();
                let mut before = 0.0;
                for a in out.accepted.iter() {
                    prefix.insert(a);
                    let after = f.value(&prefix);
                    steps.push((after - before, inst.cost_of(a)));
                    before = after;
                }
                Ok(steps)
            })
            .collect::<Result<_>>()?;
        let k = (1.0 - eps) * (1.0 - eps) * theta;
        let totals: Vec<(f64, f64)> = runs
            .iter()
            .map(|s| (s.iter().map(|p| p.0).sum(), s.iter().map(|p| p.1).sum()))
            .collect();
        let longest = runs.iter().map(Vec::len).max().unwrap_or(0);
        let positions = (0..longest)
            .filter_map(|i| {
                let pairs: Vec<(f64, f64)> = runs.iter().filter_map(|s| s.get(i).copied()).collect();
                (pairs.len() >= MIN_POSITION_SAMPLES).then(|| (i + 1, ExpectationStat::from_pairs(&pairs, k)))
            })
            .collect();
        levels.push(ThresholdLevel {
            theta,
            set: ExpectationStat::from_pairs(&totals, k),
            positions,
        });
    }
    Ok(SamplingReport { n: inst.n(), levels })
}

// ---------------------------------------------------------------------------
// Adaptivity scaling.

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BenchBudget {
    /// The same budget `B` at every size.
    Absolute(f64),
    /// `B` as a fraction of total cost.
    Fraction(f64),
}

pub const BENCH_SIZES: [usize; 4] = [64, 256, 1024, 4096];
pub const BENCH_BUDGET: BenchBudget = BenchBudget::Absolute(5.0);

#[derive(Clone, Debug)]
pub struct AdaptivityReport {
    /// `(n, mean AST-proper rounds)`.
    pub points: Vec<(usize, f64)>,
    pub fit: LinearFit,
    pub growth: f64,
    /// `2·log(n_max)/log(n_min)`.
    pub growth_limit: f64,
    pub checks: RunChecks,
}

impl AdaptivityReport {
    pub fn passed(&self) -> bool {
        self.fit.r_squared >= 0.9 && self.growth <= self.growth_limit
    }
}

/// Mean AST-proper rounds over `runs` seeds on `G(n, p)` cut instances.
pub fn adaptivity_suite(sizes: &[usize], p: f64, budget: BenchBudget, runs: usize, seed: u64) -> Result<AdaptivityReport> {
    let mut points = Vec::new();
    let mut checks = RunChecks::default();
    for &n in sizes {
        let g = gen_erdos_renyi(n, p, seed)?;
        let instance = match budget {
            BenchBudget::Absolute(b) => KnapsackInstance::new(g.costs, b)?,
            BenchBudget::Fraction(f) => KnapsackInstance::with_budget_fraction(g.costs, f)?,
        };
        let f = CutObjective::new(g.graph);
        let label = format!("er-cut n={n}");
        let mut rounds = Vec::new();
        for r in 0..runs {
            let config = AstConfig::with_seed(trial_seed(seed, r));
            let (res, c) = checked_ast(&f, &instance, &config, &label)?;
            rounds.push(res.ledger.ast_proper().adaptive_rounds as f64);
            checks.merge(c);
        }
        points.push((n, Summary::of(&rounds).mean));
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (first, last) = (points[0], points[points.len() - 1]);
    Ok(AdaptivityReport {
        fit: linear_fit(&xs, &ys),
        growth: last.1 / first.1,
        growth_limit: 2.0 * (last.0 as f64).ln() / (first.0 as f64).ln(),
        points,
        checks,
    })
}

// ---------------------------------------------------------------------------
// Oracle contract.

/// Batch versus one-at-a-time evaluation and ledger arithmetic on random sets.
pub fn oracle_suite(seed: u64) -> Result<Tally> {
    let mut tally = Tally::default();
    let fixtures = [
        cut_fixture(40, 0.3, 0.5, seed)?,
        revenue_fixture(40, 0.3, 0.5, seed)?,
        image_fixture(40, 16, 0.5, seed)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for fx in &fixtures {
        let f = fx.objective.as_ref();
        let n = f.ground_size();
        for _ in 0..50 {
            tally.runs += 1;
            let sets: Vec<ElementSet> = (0..8).map(|_| random_subset(n, rng.random(), &mut rng)).collect();
            let batched = CountingOracle::new(f);
            let values = batched.evaluate_batch(&sets)?;
            let single = CountingOracle::new(f);
            let one_by_one: Vec<f64> = sets.iter().map(|s| single.evaluate(s)).collect::<smk_core::Result<_>>()?;
            tally.check(values == one_by_one, || format!("{}: batch and sequential values differ", fx.label));
            let (b, s) = (batched.ledger(), single.ledger());
            tally.check(b.adaptive_rounds == 1 && b.total_queries == 8, || format!("{}: batch ledger {b:?}", fx.label));
            tally.check(s.adaptive_rounds == 8 && s.total_queries == 8, || format!("{}: sequential ledger {s:?}", fx.label));

            let base = &sets[0];
            let cands: Vec<ElementId> = (0..n).map(ElementId).filter(|&e| !base.contains(e)).collect();
            if cands.is_empty() {
                continue;
            }
            let oracle = CountingOracle::new(f);
            let gains = oracle.marginal_batch(base, &cands)?;
            let l = oracle.ledger();
            tally.check(l.adaptive_rounds == 1 && l.total_queries == 1 + cands.len() as u64, || {
                format!("{}: marginal ledger {l:?}", fx.label)
            });
            let fb = f.value(base);
            for (&e, &g) in cands.iter().zip(&gains) {
                let with = f.value(&base.union(&ElementSet::from_ids([e])));
                tally.check(close(g, with - fb, fb.abs().max(with.abs())), || {
                    format!("{}: marginal of {e} disagrees with two evaluations", fx.label)
                });
            }
        }
    }
    Ok(tally)
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

fn random_subset<R: Rng>(n: usize, density: f64, rng: &mut R) -> ElementSet {
    (0..n).filter(|_| rng.random::<f64>() < density).map(ElementId).collect()
}

// ---------------------------------------------------------------------------
// Objective correctness.

#[derive(Clone, Debug)]
pub struct ObjectiveCheck {
    pub name: &'static str,
    pub triples: usize,
    /// Largest `f(e|B) - f(e|A)` seen; submodular means ≤ 1e-9.
    pub worst_submodular_gap: f64,
    pub sets: usize,
    /// Largest relative incremental-vs-naive disagreement.
    pub worst_incremental_error: f64,
    pub examples: Tally,
}

impl ObjectiveCheck {
    pub fn passed(&self) -> bool {
        self.triples >= 500 && self.sets >= 1000 && self.worst_submodular_gap <= 1e-9 && self.worst_incremental_error <= 1e-9 && self.examples.ok()
    }
}

/// `f(e|B) - f(e|A)` over random `A ⊆ B ⊂ V`, `e ∉ B`.
fn submodular_gap<R: Rng>(f: &dyn Objective, triples: usize, rng: &mut R) -> f64 {
    let n = f.ground_size();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..triples {
        let e = ElementId(rng.random_range(0..n));
        let big: ElementSet = (0..n)
            .map(ElementId)
            .filter(|&u| u != e && rng.random_bool(0.5))
            .collect();
        let small: ElementSet = big.iter().filter(|_| rng.random_bool(0.5)).collect();
        let single = ElementSet::from_ids([e]);
        let ga = f.value(&small.union(&single)) - f.value(&small);
        let gb = f.value(&big.union(&single)) - f.value(&big);
        worst = worst.max(gb - ga);
    }
    worst
}

/// Worst relative disagreement between the evaluator and from-scratch values,
/// both for `f(S)` after incremental inserts and for marginals.
fn incremental_error<R: Rng>(f: &dyn Objective, sets: usize, rng: &mut R) -> f64 {
    let n = f.ground_size();
    let mut worst: f64 = 0.0;
    for _ in 0..sets {
        let target = random_subset(n, rng.random(), rng);
        let split = rng.random_range(0..=target.len());
        let mut eval = f.evaluator(&target.prefix(split));
        for e in target.iter().skip(split) {
            eval.insert(e);
        }
        let naive = f.value(&target);
        worst = worst.max((eval.value() - naive).abs() / naive.abs().max(1.0));
        let e = ElementId(rng.random_range(0..n));
        let with = f.value(&target.union(&ElementSet::from_ids([e])));
        let scale = naive.abs().max(with.abs()).max(1.0);
        worst = worst.max((eval.gain(e) - (with - naive)).abs() / scale);
    }
    worst
}

/// Submodularity, incremental agreement and the hand-computed examples for
/// the three benchmark objectives.
pub fn objective_suite(seed: u64) -> Result<Vec<ObjectiveCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cut = cut_fixture(40, 0.3, 0.5, seed)?;
    let rev = revenue_fixture(40, 0.3, 0.5, seed)?;
    let img = image_fixture(40, 32, 0.5, seed)?;
    let mut out = Vec::new();
    for (name, fx) in [("revenue", &rev), ("cut", &cut), ("image_summ", &img)] {
        let f = fx.objective.as_ref();
        let mut examples = Tally { runs: 1, ..Tally::default() };
        examples.check(f.value(&ElementSet::new()) == 0.0, || format!("{name}: f(∅) ≠ 0"));
        let all = ElementSet::full(f.ground_size());
        if name != "image_summ" {
            examples.check(f.value(&all) == 0.0, || format!("{name}: f(V) ≠ 0"));
        }
        for _ in 0..1000 {
            let s = random_subset(f.ground_size(), rng.random(), &mut rng);
            let v = f.value(&s);
            examples.check(v >= -1e-12, || format!("{name}: negative value {v}"));
        }
        hand_examples(name, &mut examples)?;
        out.push(ObjectiveCheck {
            name,
            triples: 600,
            worst_submodular_gap: submodular_gap(f, 600, &mut rng),
            sets: 1000,
            worst_incremental_error: incremental_error(f, 1000, &mut rng),
            examples,
        });
    }
    Ok(out)
}

fn hand_examples(name: &str, t: &mut Tally) -> Result<()> {
    match name {
        "revenue" => {
            let star = RevenueObjective::new(WeightedGraph::new(4, vec![(0, 1, 1.0), (0, 2, 4.0), (0, 3, 9.0)])?);
            let v = star.value(&ElementSet::from_ids([0usize]));
            t.check(v == 6.0, || format!("revenue: star example gave {v}, expected 6"));
            let c = revenue_costs(&WeightedGraph::new(2, vec![(0, 1, 1.0)])?, RevenueCostRule::OneMinusExpNeg, DEFAULT_COST_FLOOR)?;
            t.check((c[0] - (1.0 - (-1.0f64).exp())).abs() < 1e-15, || "revenue: cost of unit-weight node".into());
        }
        "cut" => {
            let tri = CutObjective::new(WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])?);
            t.check(tri.value(&ElementSet::from_ids([0usize])) == 2.0, || "cut: triangle example".into());
            let path = CutObjective::new(WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)])?);
            t.check(path.value(&ElementSet::from_ids([1usize])) == 2.0, || "cut: path example".into());
        }
        _ => {
            let ones = ImageSummarization::new(SimilarityMatrix::new(2, vec![1.0; 4])?);
            t.check(ones.value(&ElementSet::from_ids([0usize])) == 1.0, || "image_summ: all-ones example".into());
            let single = ImageSummarization::new(SimilarityMatrix::new(1, vec![1.0])?);
            t.check(single.value(&ElementSet::from_ids([0usize])) == 0.0, || "image_summ: n=1 example".into());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Unconstrained step.

#[derive(Clone, Debug)]
pub struct QuarterRow {
    pub label: String,
    pub opt: f64,
    pub value: Summary,
    /// Calls that did not use exactly one round.
    pub round_violations: usize,
}

impl QuarterRow {
    pub fn passed(&self) -> bool {
        self.value.upper() >= self.opt / 4.0 && self.round_violations == 0
    }
}

/// `seeds` calls of the unconstrained step on n=12 instances of each objective.
pub fn quarter_suite(seeds: usize, seed: u64) -> Result<Vec<QuarterRow>> {
    let samples = AstConfig::default().unsubmax_samples;
    let fixtures = [
        cut_fixture(12, 0.5, 1.0, seed)?,
        revenue_fixture(12, 0.5, 1.0, seed)?,
        image_fixture(12, 16, 1.0, seed)?,
        mixture_fixture(12, 0.5, 1.0, seed)?,
    ];
    let mut rows = Vec::new();
    for fx in fixtures {
        let f = fx.objective.as_ref();
        let opt = brute_force_unconstrained(f)?;
        let ground = ElementSet::full(f.ground_size());
        let runs: Vec<(f64, u64)> = (0..seeds)
            .into_par_iter()
            .map(|s| {
                let oracle = CountingOracle::new(f);
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, s));
                let r = unsub_max(&oracle, &ground, samples, &mut rng)?;
                Ok((r.value, oracle.ledger().adaptive_rounds))
            })
            .collect::<Result<_>>()?;
        let values: Vec<f64> = runs.iter().map(|r| r.0).collect();
        rows.push(QuarterRow {
            label: fx.label.replace(" b=1", ""),
            opt: opt.value,
            value: Summary::of(&values),
            round_violations: runs.iter().filter(|r| r.1 != 1).count(),
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Desk-scale comparison with density greedy.

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub fraction: f64,
    pub ast_value: f64,
    pub greedy_value: f64,
    /// Mean AST-proper rounds.
    pub ast_rounds: f64,
    pub greedy_rounds: u64,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub checks: RunChecks,
}

impl SweepReport {
    pub fn value_wins(&self) -> usize {
        self.rows.iter().filter(|r| r.ast_value >= r.greedy_value).count()
    }

    pub fn value_passed(&self) -> bool {
        2 * self.value_wins() >= self.rows.len()
    }

    /// At the largest budget.
    pub fn rounds_passed(&self) -> bool {
        let last = self.rows.last().expect("non-empty grid");
        last.ast_rounds <= last.greedy_rounds as f64
    }

    pub fn passed(&self) -> bool {
        self.value_passed() && self.rounds_passed()
    }
}

/// Budget grid 0.02, 0.04, ..., 0.20.
pub fn sweep_fractions() -> Vec<f64> {
    (1..=10).map(|i| i as f64 * 0.02).collect()
}

/// AST (mean over `trials` seeds) against density greedy on one `G(n, p)` cut instance.
pub fn sweep_suite(n: usize, p: f64, fractions: &[f64], trials: usize, seed: u64) -> Result<SweepReport> {
    let g = gen_erdos_renyi(n, p, seed)?;
    let f = CutObjective::new(g.graph);
    let mut rows = Vec::new();
    let mut checks = RunChecks::default();
    for &fraction in fractions {
        let instance = KnapsackInstance::with_budget_fraction(g.costs.clone(), fraction)?;
        let label = format!("er-cut n={n} b={fraction:.2}");
        let runs: Vec<(f64, f64, RunChecks)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let config = AstConfig::with_seed(trial_seed(seed, t));
                let (res, c) = checked_ast(&f, &instance, &config, &label)?;
                Ok((res.value, res.ledger.ast_proper().adaptive_rounds as f64, c))
            })
            .collect::<Result<_>>()?;
        let oracle = CountingOracle::new(&f);
        let greedy = density_greedy(&oracle, &instance)?;
        rows.push(SweepRow {
            fraction,
            ast_value: runs.iter().map(|r| r.0).sum::<f64>() / trials as f64,
            greedy_value: f.value(&greedy),
            ast_rounds: runs.iter().map(|r| r.1).sum::<f64>() / trials as f64,
            greedy_rounds: oracle.ledger().adaptive_rounds,
        });
        for (_, _, c) in runs {
            checks.merge(c);
        }
    }
    Ok(SweepReport { rows, checks })
}
