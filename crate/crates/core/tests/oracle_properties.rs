use proptest::prelude::*;

use smk_core::objectives::{gen_erdos_renyi, CutObjective, RevenueObjective};
use smk_core::{CountingOracle, ElementId, ElementSet, Objective, QueryLedger};

const N: usize = 24;

fn graph_objectives(seed: u64) -> (CutObjective, RevenueObjective) {
    let g = gen_erdos_renyi(N, 0.3, seed).unwrap();
    (CutObjective::new(g.graph.clone()), RevenueObjective::new(g.graph))
}

fn arb_set() -> impl Strategy<Value = ElementSet> {
    prop::collection::vec(0..N, 0..N).prop_map(ElementSet::from_ids)
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.abs().max(1.0)
}

#[derive(Clone, Debug)]
enum Call {
    Evaluate(ElementSet),
    Batch(Vec<ElementSet>),
    Marginals(ElementSet, Vec<usize>),
}

fn arb_call() -> impl Strategy<Value = Call> {
    prop_oneof![
        arb_set().prop_map(Call::Evaluate),
        prop::collection::vec(arb_set(), 1..6).prop_map(Call::Batch),
        (arb_set(), prop::collection::vec(0..N, 0..10)).prop_map(|(s, c)| Call::Marginals(s, c)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn batch_matches_one_at_a_time(seed in 0u64..1000, sets in prop::collection::vec(arb_set(), 1..12)) {
        let (cut, rev) = graph_objectives(seed);
        for f in [&cut as &dyn Objective, &rev] {
            let batched = CountingOracle::new(f);
            let values = batched.evaluate_batch(&sets).unwrap();
            let single = CountingOracle::new(f);
            for (s, v) in sets.iter().zip(&values) {
                prop_assert_eq!(single.evaluate(s).unwrap(), *v);
            }
            prop_assert_eq!(batched.ledger(), QueryLedger { total_queries: sets.len() as u64, adaptive_rounds: 1 });
            prop_assert_eq!(single.ledger(), QueryLedger { total_queries: sets.len() as u64, adaptive_rounds: sets.len() as u64 });
        }
    }

    #[test]
    fn ledger_counts_every_call(seed in 0u64..1000, calls in prop::collection::vec(arb_call(), 0..20)) {
        let (cut, _) = graph_objectives(seed);
        let oracle = CountingOracle::new(&cut);
        let mut expected = QueryLedger::default();
        for call in &calls {
            let before = oracle.ledger();
            let queries = match call {
                Call::Evaluate(s) => {
                    oracle.evaluate(s).unwrap();
                    1
                }
                Call::Batch(sets) => {
                    oracle.evaluate_batch(sets).unwrap();
                    sets.len() as u64
                }
                Call::Marginals(base, cands) => {
                    let cands: Vec<ElementId> = cands.iter().copied().map(ElementId).collect();
                    oracle.marginal_batch(base, &cands).unwrap();
                    1 + cands.iter().filter(|&&e| !base.contains(e)).count() as u64
                }
            };
            let delta = oracle.ledger().since(&before);
            prop_assert_eq!(delta, QueryLedger { total_queries: queries, adaptive_rounds: 1 });
            expected = expected + delta;
        }
        prop_assert_eq!(oracle.ledger(), expected);
    }

    #[test]
    fn values_do_not_depend_on_history(seed in 0u64..1000, probe in arb_set(), noise in prop::collection::vec(arb_set(), 0..10)) {
        let (cut, rev) = graph_objectives(seed);
        for f in [&cut as &dyn Objective, &rev] {
            let oracle = CountingOracle::new(f);
            let first = oracle.evaluate(&probe).unwrap();
            for s in &noise {
                oracle.evaluate(s).unwrap();
                oracle.marginal_batch(s, &[ElementId(0), ElementId(N - 1)]).unwrap();
            }
            prop_assert_eq!(oracle.evaluate(&probe).unwrap(), first);
            prop_assert_eq!(f.value(&probe), first);
        }
    }

    #[test]
    fn chain_levels_match_fresh_marginals(seed in 0u64..1000, base in arb_set(), chain in prop::collection::vec(0..N, 0..8)) {
        let (cut, rev) = graph_objectives(seed);
        let chain: Vec<ElementId> = chain.into_iter().map(ElementId).collect();
        let cands: Vec<ElementId> = (0..N).map(ElementId).collect();
        for f in [&cut as &dyn Objective, &rev] {
            let oracle = CountingOracle::new(f);
            let levels = oracle.chain_marginals(&base, &chain, &cands, |_, _| true).unwrap();
            prop_assert_eq!(oracle.ledger().adaptive_rounds, 1);
            prop_assert_eq!(levels.len(), chain.len() + 1);
            let mut g = base.clone();
            for (i, level) in levels.iter().enumerate() {
                let fg = f.value(&g);
                prop_assert!(close(level.base_value, fg, fg));
                for (&u, gain) in cands.iter().zip(&level.gains) {
                    let gain = gain.unwrap();
                    if g.contains(u) {
                        prop_assert_eq!(gain, 0.0);
                    } else {
                        let with = f.value(&g.union(&ElementSet::from_ids([u])));
                        prop_assert!(close(gain, with - fg, fg.max(with)));
                    }
                }
                if let Some(&next) = chain.get(i) {
                    g.insert(next);
                }
            }
        }
    }
}

#[test]
fn out_of_range_ids_are_rejected_without_charge() {
    let (cut, _) = graph_objectives(1);
    let oracle = CountingOracle::new(&cut);
    let bad = ElementSet::from_ids([ElementId(N)]);
    assert!(oracle.evaluate(&bad).is_err());
    assert!(oracle.evaluate_batch(&[ElementSet::new(), bad.clone()]).is_err());
    assert!(oracle.marginal_batch(&ElementSet::new(), &[ElementId(N + 3)]).is_err());
    assert!(oracle.evaluate_batch(&[]).is_err());
    assert_eq!(oracle.ledger(), QueryLedger::default());
}
