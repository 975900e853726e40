//! End-to-end checks against exhaustive enumeration on small instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smk_core::ast::{ast, AstConfig};
use smk_core::baselines::{brute_force_opt, density_greedy};
use smk_core::estimator::{default_factor, estimate_greedy, gamma_and_guesses};
use smk_core::objectives::{gen_erdos_renyi, CutObjective, Modular, RevenueObjective};
use smk_core::randbatch::{get_seq, rand_batch, RandBatchParams};
use smk_core::{CountingOracle, ElementId, ElementSet, KnapsackInstance, Objective};

/// Maximum over all feasible subsets by plain bitmask enumeration.
fn enumerate_opt(f: &dyn Objective, inst: &KnapsackInstance) -> f64 {
    let n = inst.n();
    (0u32..1 << n)
        .map(|m| ElementSet::from_ids((0..n).filter(|i| m >> i & 1 == 1)))
        .filter(|s| inst.feasible(s))
        .map(|s| f.value(&s))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn nothing_beats_the_optimum() {
    for seed in 0..40u64 {
        let n = 8 + (seed % 5) as usize;
        let g = gen_erdos_renyi(n, 0.4, seed).unwrap();
        let frac = [0.2, 0.4, 0.6][(seed % 3) as usize];
        let inst = KnapsackInstance::with_budget_fraction(g.costs.clone(), frac).unwrap();
        let f = CutObjective::new(g.graph);
        let opt = enumerate_opt(&f, &inst);
        assert_eq!(brute_force_opt(&f, &inst).unwrap().value, opt);

        let res = ast(&CountingOracle::new(&f), &inst, &AstConfig::with_seed(seed)).unwrap();
        assert!(inst.feasible(&res.solution));
        assert!(res.value <= opt + 1e-9);
        assert!(res.value >= (1.0 / 7.0 - 0.1) * opt, "seed {seed}: {} vs {opt}", res.value);
        let greedy = density_greedy(&CountingOracle::new(&f), &inst).unwrap();
        assert!(f.value(&greedy) <= opt + 1e-9);
    }
}

#[test]
fn modular_three_elements() {
    let f = Modular::new(vec![3.0, 2.0, 1.0]).unwrap();
    let inst = KnapsackInstance::new(vec![1.0; 3], 2.0).unwrap();
    let opt = enumerate_opt(&f, &inst);
    assert_eq!(opt, 5.0);
    for seed in 0..20 {
        let res = ast(&CountingOracle::new(&f), &inst, &AstConfig::with_seed(seed)).unwrap();
        assert!(res.value >= (1.0 / 7.0 - 0.1) * opt);
        assert!(inst.cost(&res.solution) <= 2.0);
    }
}

#[test]
fn grid_brackets_the_optimal_density() {
    let (alpha, eps, delta) = (1.0 / 7.0, 0.1, 0.12);
    let beta = default_factor(delta);
    let mut checked = 0;
    for seed in 0..60u64 {
        let n = 10 + (seed % 7) as usize;
        let g = gen_erdos_renyi(n, 0.4, seed).unwrap();
        let inst = KnapsackInstance::with_budget_fraction(g.costs.clone(), 0.3).unwrap();
        let f = RevenueObjective::new(g.graph);
        let opt = brute_force_opt(&f, &inst).unwrap().value;
        let est = estimate_greedy(&CountingOracle::new(&f), &inst, beta).unwrap();
        if !(est.value >= beta * opt && est.value <= opt) {
            continue;
        }
        checked += 1;
        let grid = gamma_and_guesses(&est, alpha, eps, delta, inst.budget()).unwrap();
        let ths = grid.thresholds(eps);
        let scale = opt / inst.budget();
        assert!(ths[0] >= scale, "seed {seed}: top {} below OPT/B {scale}", ths[0]);
        assert!(*ths.last().unwrap() <= eps * scale, "seed {seed}: bottom too high");
    }
    assert!(checked >= 50);
}

#[test]
fn rand_batch_output_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for seed in 0..200u64 {
        let g = gen_erdos_renyi(30, 0.3, seed).unwrap();
        let inst = KnapsackInstance::with_budget_fraction(g.costs.clone(), 0.25).unwrap();
        let f = CutObjective::new(g.graph);
        let conditioning: ElementSet = (0..30).filter(|_| rng.random_bool(0.05)).map(ElementId).collect();
        if !inst.feasible(&conditioning) {
            continue;
        }
        let pool: Vec<ElementId> = (0..30).map(ElementId).filter(|&e| !conditioning.contains(e)).collect();
        let params = RandBatchParams {
            threshold: 0.5 + 5.0 * rng.random::<f64>(),
            max_count: 1 + (seed % 4) as usize,
            p: if seed % 2 == 0 { 1.0 } else { 0.5 },
            epsilon: 0.1,
        };
        let out = rand_batch(&CountingOracle::new(&f), &pool, &params, &inst, &conditioning, &mut rng).unwrap();
        assert!(out.accepted.is_subset(&out.offered));
        assert!(out.offered.iter().all(|e| pool.contains(&e)));
        assert!(inst.cost(&conditioning) + inst.cost(&out.accepted) <= inst.budget());
        assert!(out.remaining.is_empty() || out.count >= params.max_count);
        assert!(out.count <= params.max_count);
    }
}

#[test]
fn get_seq_first_draw_is_uniform() {
    let inst = KnapsackInstance::new(vec![1.0; 6], 2.0).unwrap();
    let pool: Vec<ElementId> = (0..6).map(ElementId).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let draws = 6000;
    let mut counts = [0usize; 6];
    for _ in 0..draws {
        let seq = get_seq(&ElementSet::new(), &pool, &inst, 0.0, &mut rng);
        assert_eq!(seq.len(), 2);
        counts[seq[0].index()] += 1;
    }
    let expect = draws as f64 / 6.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    // 99.9% quantile of chi-square with 5 degrees of freedom.
    assert!(chi2 < 20.52, "chi2 = {chi2}, counts {counts:?}");
}
