#![allow(dead_code)]

use hubwalk::eval::ConfusionMatrix;
use hubwalk::graph::{Graph, LabelMap};
use hubwalk::sampling::{transition_distribution, Sampler, Strategy, WalkState};
use hubwalk::{datasets, synth};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub struct HandState {
    pub name: &'static str,
    pub graph: Graph,
    pub labels: LabelMap,
    pub state: WalkState,
}

fn state(g: &Graph, start: &str, previous: Option<&str>, current: &str) -> WalkState {
    WalkState {
        start: g.index_of(start).unwrap(),
        previous: previous.map(|p| g.index_of(p).unwrap()),
        current: g.index_of(current).unwrap(),
    }
}

/// Hand-built walk states covering hubs, mixed labels, unlabeled
/// neighbors, first steps and self-loops.
pub fn hand_built_states() -> Vec<HandState> {
    let mut out = Vec::new();

    let house = "a b\na c\na d\nb c\nc e\nd e\ne f\nb f\nc f";
    let g = Graph::from_text(house, false).unwrap();
    let l = LabelMap::from_text("a A\nb A\nc B\nd B\ne A\nf B", &g).unwrap();
    for (name, s, p, c) in [
        ("house-first-step", "a", None, "a"),
        ("house-from-a", "a", Some("a"), "c"),
        ("house-b-via-c", "b", Some("c"), "f"),
        ("house-d-via-e", "d", Some("e"), "c"),
    ] {
        out.push(HandState {
            name,
            state: state(&g, s, p, c),
            graph: g.clone(),
            labels: l.clone(),
        });
    }

    let g = Graph::from_text("v a\nc x\nc y\nc z\nx a\nx b\nx d\ny e\nz v", false).unwrap();
    let l = LabelMap::from_text("v A\nc A\na A\nb B\nd B\ne A", &g).unwrap();
    out.push(HandState {
        name: "unlabeled-neighbor",
        state: state(&g, "v", Some("z"), "c"),
        graph: g.clone(),
        labels: l.clone(),
    });
    out.push(HandState {
        name: "unlabeled-start",
        state: state(&g, "z", Some("v"), "c"),
        graph: g,
        labels: l,
    });

    let (g, l) = datasets::karate();
    for (name, s, p, c) in [
        ("karate-officer-hub", "1", Some("9"), "34"),
        ("karate-instructor-hub", "34", Some("32"), "1"),
        ("karate-ambiguous", "9", Some("1"), "3"),
        ("karate-low-degree", "12", None, "12"),
    ] {
        out.push(HandState {
            name,
            state: state(&g, s, p, c),
            graph: g.clone(),
            labels: l.clone(),
        });
    }

    let g = Graph::from_text("s s\nt u", false).unwrap().with_isolated_self_loops();
    let l = LabelMap::from_text("s A\nt A\nu B", &g).unwrap();
    out.push(HandState {
        name: "self-loop",
        state: state(&g, "s", Some("s"), "s"),
        graph: g,
        labels: l,
    });

    let (g, l) = synth::generate_planted(&synth::PlantedConfig {
        n_nodes: 60,
        n_classes: 3,
        p_in: 0.3,
        p_out: 0.05,
        hub_fraction: 0.1,
        hub_degree_boost: 3.0,
        bad_hub_fraction: 0.5,
        seed: 7,
    })
    .unwrap();
    let hub = (0..g.node_count()).max_by_key(|&v| g.degree(v)).unwrap();
    let prev = g.neighbors(hub)[0];
    out.push(HandState {
        name: "planted-hub",
        state: WalkState {
            start: prev,
            previous: Some(prev),
            current: hub,
        },
        graph: g,
        labels: l,
    });
    out
}

pub fn strategy_suite() -> Vec<Strategy> {
    vec![
        Strategy::Uniform,
        Strategy::Node2vec {
            return_param: 0.5,
            inout_param: 2.0,
        },
        Strategy::Node2vec {
            return_param: 4.0,
            inout_param: 0.25,
        },
        Strategy::SCWalk { bias: 0.5 },
        Strategy::SCWalk { bias: 1.0 },
        Strategy::HubWalkDistribution { bias: 0.5 },
        Strategy::HubWalkDistribution { bias: 1.0 },
    ]
}

pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Draws landing on a zero-probability neighbor.
    pub impossible: u64,
}

/// Goodness of fit of `draws` sampled steps against the exact distribution.
pub fn chi_square_step_test(h: &HandState, strategy: Strategy, draws: usize, seed: u64) -> ChiSquare {
    let expected = transition_distribution(&h.graph, &h.labels, &strategy, &h.state).unwrap();
    let neighbors = h.graph.neighbors(h.state.current);
    let sampler = Sampler::new(&h.graph, &h.labels, strategy);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; neighbors.len()];
    for _ in 0..draws {
        let next = sampler.step(&h.state, &mut rng).unwrap();
        counts[neighbors.binary_search(&next).unwrap()] += 1;
    }
    chi_square(&counts, &expected, draws)
}

pub fn chi_square(counts: &[u64], expected: &[f64], draws: usize) -> ChiSquare {
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut impossible = 0;
    for (&o, &p) in counts.iter().zip(expected) {
        if p == 0.0 {
            impossible += o;
            continue;
        }
        let e = p * draws as f64;
        statistic += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    let dof = cells.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).unwrap().cdf(statistic)
    };
    ChiSquare {
        statistic,
        dof,
        p_value,
        impossible,
    }
}

/// Accuracy, macro precision, macro recall and F1 recomputed by expanding
/// the matrix into individual samples.
pub fn brute_force_metrics(m: &ConfusionMatrix) -> (f64, f64, f64, f64) {
    let k = m.counts.len();
    let mut samples = Vec::new();
    for (t, row) in m.counts.iter().enumerate() {
        for (p, &c) in row.iter().enumerate() {
            for _ in 0..c {
                samples.push((t, p));
            }
        }
    }
    let correct = samples.iter().filter(|(t, p)| t == p).count();
    let accuracy = correct as f64 / samples.len() as f64;
    let (mut ps, mut rs) = (0.0, 0.0);
    for c in 0..k {
        let tp = samples.iter().filter(|&&(t, p)| t == c && p == c).count() as f64;
        let predicted = samples.iter().filter(|&&(_, p)| p == c).count() as f64;
        let actual = samples.iter().filter(|&&(t, _)| t == c).count() as f64;
        ps += if predicted > 0.0 { tp / predicted } else { 0.0 };
        rs += if actual > 0.0 { tp / actual } else { 0.0 };
    }
    let (p, r) = (ps / k as f64, rs / k as f64);
    let f1 = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
    (accuracy, p, r, f1)
}

/// Largest relative deviation between analytic and central-difference
/// gradients of the pair objective, over every input coordinate.
pub fn gradient_check(center: &[f64], context: &[f64], negatives: &[Vec<f64>], h: f64) -> f64 {
    use hubwalk::embedding::sgns_pair_objective;
    let negs: Vec<&[f64]> = negatives.iter().map(|v| v.as_slice()).collect();
    let g = sgns_pair_objective(center, context, &negs).unwrap();
    let mut worst: f64 = 0.0;
    let mut vecs: Vec<Vec<f64>> = vec![center.to_vec(), context.to_vec()];
    vecs.extend(negatives.iter().cloned());
    let analytic: Vec<&[f64]> = std::iter::once(g.center.as_slice())
        .chain(std::iter::once(g.context.as_slice()))
        .chain(g.negatives.iter().map(|v| v.as_slice()))
        .collect();
    let loss_of = |vs: &[Vec<f64>]| {
        let negs: Vec<&[f64]> = vs[2..].iter().map(|v| v.as_slice()).collect();
        sgns_pair_objective(&vs[0], &vs[1], &negs).unwrap().loss
    };
    for which in 0..vecs.len() {
        for d in 0..center.len() {
            let mut plus = vecs.clone();
            plus[which][d] += h;
            let mut minus = vecs.clone();
            minus[which][d] -= h;
            let numeric = (loss_of(&plus) - loss_of(&minus)) / (2.0 * h);
            let a = analytic[which][d];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-8);
            worst = worst.max(rel);
        }
    }
    worst
}
