mod common;

use common::{chi_square_step_test, hand_built_states, strategy_suite};
use hubwalk::graph::{Graph, LabelMap};
use hubwalk::sampling::{
    generate_corpus, hubwalkdist_step, node2vec_step, scwalk_step, transition_distribution, uniform_step, Strategy,
    WalkConfig, WalkState,
};
use proptest::prelude::*;
use proptest::strategy::Strategy as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn hand_built_suite_is_large_enough() {
    assert!(hand_built_states().len() >= 10);
}

#[test]
fn empirical_steps_match_exact_distribution() {
    for (i, h) in hand_built_states().iter().enumerate() {
        for (j, s) in strategy_suite().into_iter().enumerate() {
            let r = chi_square_step_test(h, s, 100_000, (i * 31 + j) as u64);
            assert_eq!(r.impossible, 0, "{} {}", h.name, s.tag());
            assert!(
                r.p_value > 0.001,
                "{} {}: chi2={:.2} dof={} p={:.2e}",
                h.name,
                s.tag(),
                r.statistic,
                r.dof,
                r.p_value
            );
        }
    }
}

/// The free-standing step functions draw from the same law as the sampler.
#[test]
fn direct_step_functions_match_distribution() {
    for h in hand_built_states().iter().take(6) {
        for s in strategy_suite() {
            let expected = transition_distribution(&h.graph, &h.labels, &s, &h.state).unwrap();
            let ns = h.graph.neighbors(h.state.current);
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            let mut counts = vec![0u64; ns.len()];
            let draws = 100_000;
            for _ in 0..draws {
                let next = match s {
                    Strategy::Uniform => uniform_step(&h.graph, &h.state, &mut rng),
                    Strategy::Node2vec {
                        return_param,
                        inout_param,
                    } => node2vec_step(&h.graph, &h.state, return_param, inout_param, &mut rng),
                    Strategy::SCWalk { bias } => scwalk_step(&h.graph, &h.labels, &h.state, bias, &mut rng),
                    Strategy::HubWalkDistribution { bias } => {
                        hubwalkdist_step(&h.graph, &h.labels, &h.state, bias, &mut rng)
                    }
                }
                .unwrap();
                counts[ns.binary_search(&next).unwrap()] += 1;
            }
            let r = common::chi_square(&counts, &expected, draws);
            assert_eq!(r.impossible, 0);
            assert!(r.p_value > 0.001, "{} {} p={:.2e}", h.name, s.tag(), r.p_value);
        }
    }
}

#[test]
fn zero_bias_equals_uniform_exactly() {
    for h in hand_built_states() {
        let u = transition_distribution(&h.graph, &h.labels, &Strategy::Uniform, &h.state).unwrap();
        for s in [Strategy::SCWalk { bias: 0.0 }, Strategy::HubWalkDistribution { bias: 0.0 }] {
            assert_eq!(transition_distribution(&h.graph, &h.labels, &s, &h.state).unwrap(), u, "{}", h.name);
        }
    }
}

#[test]
fn full_bias_scwalk_keeps_start_label() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for h in hand_built_states() {
        let has_same = h
            .graph
            .neighbors(h.state.current)
            .iter()
            .any(|&x| h.labels.same(x, h.state.start));
        if !has_same {
            continue;
        }
        for _ in 0..10_000 {
            let next = scwalk_step(&h.graph, &h.labels, &h.state, 1.0, &mut rng).unwrap();
            assert!(h.labels.same(next, h.state.start), "{}", h.name);
            checked += 1;
        }
    }
    assert!(checked >= 10_000);
}

#[test]
fn full_bias_hub_walk_is_monotone_in_score() {
    for h in hand_built_states() {
        let ns = h.graph.neighbors(h.state.current);
        let d = transition_distribution(&h.graph, &h.labels, &Strategy::HubWalkDistribution { bias: 1.0 }, &h.state)
            .unwrap();
        let score = |x: usize| {
            let nx = h.graph.neighbors(x);
            nx.iter().filter(|&&y| h.labels.same(y, h.state.start)).count() as f64 / nx.len() as f64
        };
        if ns.iter().all(|&x| score(x) == 0.0) {
            continue;
        }
        for a in 0..ns.len() {
            for b in 0..ns.len() {
                let (sa, sb) = (score(ns[a]), score(ns[b]));
                if sa > sb {
                    assert!(d[a] > d[b], "{}", h.name);
                } else if sa == sb {
                    assert!((d[a] - d[b]).abs() < 1e-15, "{}", h.name);
                }
            }
        }
    }
}

fn random_graph(edges: &[(u8, u8)], labels: &[Option<u8>]) -> (Graph, LabelMap) {
    let text: String = edges.iter().map(|(a, b)| format!("{a} {b}\n")).collect();
    let g = Graph::from_text(&text, false).unwrap().with_isolated_self_loops();
    let dense = (0..g.node_count())
        .map(|v| {
            let id: usize = g.external_id(v).parse().unwrap();
            labels[id % labels.len()].map(|l| l as usize)
        })
        .collect();
    (g, LabelMap::from_labels(dense, 3).unwrap())
}

fn arb_strategy() -> impl proptest::strategy::Strategy<Value = Strategy> {
    prop_oneof![
        Just(Strategy::Uniform),
        (0.1f64..5.0, 0.1f64..5.0).prop_map(|(p, q)| Strategy::Node2vec {
            return_param: p,
            inout_param: q
        }),
        (0.0f64..=1.0).prop_map(|bias| Strategy::SCWalk { bias }),
        (0.0f64..=1.0).prop_map(|bias| Strategy::HubWalkDistribution { bias }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributions_sum_to_one(
        edges in prop::collection::vec((0u8..12, 0u8..12), 1..40),
        labels in prop::collection::vec(prop::option::of(0u8..3), 1..6),
        strategy in arb_strategy(),
    ) {
        let (g, l) = random_graph(&edges, &labels);
        for start in 0..g.node_count() {
            for current in 0..g.node_count() {
                let prevs = std::iter::once(None).chain(g.neighbors(current).iter().map(|&p| Some(p)));
                for previous in prevs {
                    let st = WalkState { start, previous, current };
                    let d = transition_distribution(&g, &l, &strategy, &st).unwrap();
                    prop_assert_eq!(d.len(), g.degree(current));
                    prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                    prop_assert!(d.iter().all(|&p| (0.0..=1.0).contains(&p)));
                }
            }
        }
    }

    #[test]
    fn corpus_walks_are_paths_and_deterministic(
        edges in prop::collection::vec((0u8..12, 0u8..12), 1..40),
        labels in prop::collection::vec(prop::option::of(0u8..3), 1..6),
        strategy in arb_strategy(),
        seed in any::<u64>(),
    ) {
        let (g, l) = random_graph(&edges, &labels);
        let cfg = WalkConfig { walks_per_node: 3, walk_length: 12, strategy, seed };
        let a = generate_corpus(&g, &l, &cfg).unwrap();
        prop_assert_eq!(a.len(), 3 * g.node_count());
        for w in &a.walks {
            prop_assert_eq!(w.len(), 12);
            for pair in w.windows(2) {
                prop_assert!(g.has_edge(pair[0], pair[1]));
            }
        }
        let b = generate_corpus(&g, &l, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }
}
