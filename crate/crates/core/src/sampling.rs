//! Walk corpus generation with pluggable next-node strategies.
//!
//! Every walk starts at a node `v`, records the current node and then moves
//! to a neighbor chosen by the configured [`Strategy`]. The two hub-aware
//! strategies compare candidate labels with the label of the *start* node:
//!
//! * `SCWalk`: with probability `bias`, pick uniformly among neighbors
//!   sharing `v`'s label (or among the rest when there are none), otherwise
//!   pick uniformly.
//! * `HubWalkDistribution`: with probability `bias`, pick a neighbor `x`
//!   proportionally to the share of `x`'s own neighbors labeled like `v`,
//!   otherwise pick uniformly.
//!
//! An unlabeled node never matches any label.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelMap, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Uniform,
    Node2vec { return_param: f64, inout_param: f64 },
    #[serde(rename = "scwalk")]
    SCWalk { bias: f64 },
    #[serde(rename = "hubwalk")]
    HubWalkDistribution { bias: f64 },
}

impl Strategy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Strategy::Uniform => Ok(()),
            Strategy::Node2vec {
                return_param,
                inout_param,
            } => {
                if return_param > 0.0 && inout_param > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "node2vec parameters must be positive (return {return_param}, in-out {inout_param})"
                    )))
                }
            }
            Strategy::SCWalk { bias } | Strategy::HubWalkDistribution { bias } => {
                if (0.0..=1.0).contains(&bias) {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("bias probability {bias} outside [0, 1]")))
                }
            }
        }
    }

    /// Short name used in file names and reports, e.g. `scwalk-p0.85`.
    pub fn tag(&self) -> String {
        match *self {
            Strategy::Uniform => "uniform".to_string(),
            Strategy::Node2vec {
                return_param,
                inout_param,
            } => format!("node2vec-p{return_param}-q{inout_param}"),
            Strategy::SCWalk { bias } => format!("scwalk-p{bias}"),
            Strategy::HubWalkDistribution { bias } => format!("hubwalk-p{bias}"),
        }
    }

    pub fn uses_labels(&self) -> bool {
        matches!(self, Strategy::SCWalk { .. } | Strategy::HubWalkDistribution { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub strategy: Strategy,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 10,
            walk_length: 80,
            strategy: Strategy::Uniform,
            seed: 0,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.walks_per_node == 0 || self.walk_length == 0 {
            return Err(Error::InvalidParameter(
                "walks per node and walk length must be at least 1".into(),
            ));
        }
        self.strategy.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkState {
    pub start: NodeId,
    pub previous: Option<NodeId>,
    pub current: NodeId,
}

impl WalkState {
    pub fn new(start: NodeId) -> WalkState {
        WalkState {
            start,
            previous: None,
            current: start,
        }
    }

    fn advance(&mut self, next: NodeId) {
        self.previous = Some(self.current);
        self.current = next;
    }
}

fn neighborhood(graph: &Graph, node: NodeId) -> Result<&[NodeId]> {
    let neighbors = graph.neighbors(node);
    if neighbors.is_empty() {
        Err(Error::IsolatedNode(graph.external_id(node).to_string()))
    } else {
        Ok(neighbors)
    }
}

/// Index drawn proportionally to `weights` (not necessarily normalized).
fn pick_weighted<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let mut target = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if target < w {
            return i;
        }
        target -= w;
    }
    // rounding left a sliver past the end; take the last positive weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}

pub fn uniform_step<R: Rng + ?Sized>(graph: &Graph, state: &WalkState, rng: &mut R) -> Result<NodeId> {
    let neighbors = neighborhood(graph, state.current)?;
    Ok(neighbors[rng.random_range(0..neighbors.len())])
}

/// Second-order step: weight `1/return_param` to go back, `1` to stay at
/// distance one from the previous node, `1/inout_param` to move away. The
/// first step of a walk is uniform.
pub fn node2vec_step<R: Rng + ?Sized>(
    graph: &Graph,
    state: &WalkState,
    return_param: f64,
    inout_param: f64,
    rng: &mut R,
) -> Result<NodeId> {
    let neighbors = neighborhood(graph, state.current)?;
    let Some(previous) = state.previous else {
        return Ok(neighbors[rng.random_range(0..neighbors.len())]);
    };
    let weights: Vec<f64> = neighbors
        .iter()
        .map(|&x| node2vec_weight(graph, previous, x, return_param, inout_param))
        .collect();
    let total = weights.iter().sum();
    Ok(neighbors[pick_weighted(&weights, total, rng)])
}

#[inline]
fn node2vec_weight(graph: &Graph, previous: NodeId, x: NodeId, return_param: f64, inout_param: f64) -> f64 {
    if x == previous {
        1.0 / return_param
    } else if graph.has_edge(previous, x) {
        1.0
    } else {
        1.0 / inout_param
    }
}

pub fn scwalk_step<R: Rng + ?Sized>(
    graph: &Graph,
    labels: &LabelMap,
    state: &WalkState,
    bias: f64,
    rng: &mut R,
) -> Result<NodeId> {
    let neighbors = neighborhood(graph, state.current)?;
    if rng.random::<f64>() < bias {
        let same = neighbors.iter().filter(|&&x| labels.same(x, state.start)).count();
        if same > 0 {
            let k = rng.random_range(0..same);
            return Ok(*neighbors
                .iter()
                .filter(|&&x| labels.same(x, state.start))
                .nth(k)
                .expect("k < same"));
        }
        // S is empty, so D is the whole neighborhood
    }
    Ok(neighbors[rng.random_range(0..neighbors.len())])
}

/// Share of `x`'s neighbors labeled like `start`.
fn hub_score(graph: &Graph, labels: &LabelMap, x: NodeId, start: NodeId) -> f64 {
    let ns = graph.neighbors(x);
    let same = ns.iter().filter(|&&y| labels.same(y, start)).count();
    same as f64 / ns.len() as f64
}

pub fn hubwalkdist_step<R: Rng + ?Sized>(
    graph: &Graph,
    labels: &LabelMap,
    state: &WalkState,
    bias: f64,
    rng: &mut R,
) -> Result<NodeId> {
    let neighbors = neighborhood(graph, state.current)?;
    if rng.random::<f64>() < bias {
        let scores: Vec<f64> = neighbors
            .iter()
            .map(|&x| hub_score(graph, labels, x, state.start))
            .collect();
        let total: f64 = scores.iter().sum();
        if total > 0.0 {
            return Ok(neighbors[pick_weighted(&scores, total, rng)]);
        }
    }
    Ok(neighbors[rng.random_range(0..neighbors.len())])
}

/// Exact next-step distribution, aligned with `graph.neighbors(state.current)`.
pub fn transition_distribution(
    graph: &Graph,
    labels: &LabelMap,
    strategy: &Strategy,
    state: &WalkState,
) -> Result<Vec<f64>> {
    let neighbors = neighborhood(graph, state.current)?;
    let k = neighbors.len() as f64;
    let uniform = vec![1.0 / k; neighbors.len()];
    let normalize = |w: Vec<f64>| {
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect::<Vec<f64>>()
    };
    let mix = |bias: f64, biased: Vec<f64>| {
        biased
            .iter()
            .zip(&uniform)
            .map(|(b, u)| bias * b + (1.0 - bias) * u)
            .collect::<Vec<f64>>()
    };
    let dist = match *strategy {
        Strategy::Uniform => uniform.clone(),
        Strategy::Node2vec {
            return_param,
            inout_param,
        } => match state.previous {
            None => uniform.clone(),
            Some(prev) => normalize(
                neighbors
                    .iter()
                    .map(|&x| node2vec_weight(graph, prev, x, return_param, inout_param))
                    .collect(),
            ),
        },
        Strategy::SCWalk { bias } => {
            if bias == 0.0 {
                return Ok(uniform);
            }
            let in_s: Vec<bool> = neighbors.iter().map(|&x| labels.same(x, state.start)).collect();
            let s = in_s.iter().filter(|&&b| b).count();
            let biased = if s > 0 {
                in_s.iter().map(|&b| if b { 1.0 / s as f64 } else { 0.0 }).collect()
            } else {
                uniform.clone()
            };
            mix(bias, biased)
        }
        Strategy::HubWalkDistribution { bias } => {
            if bias == 0.0 {
                return Ok(uniform);
            }
            let scores: Vec<f64> = neighbors
                .iter()
                .map(|&x| hub_score(graph, labels, x, state.start))
                .collect();
            let biased = if scores.iter().sum::<f64>() > 0.0 {
                normalize(scores)
            } else {
                uniform.clone()
            };
            mix(bias, biased)
        }
    };
    Ok(dist)
}

/// Per-strategy step dispatcher used during corpus generation. Hub scores
/// are served from a per-node, per-class count table instead of rescanning
/// second-order neighborhoods; draws match [`hubwalkdist_step`] exactly.
pub struct Sampler<'a> {
    graph: &'a Graph,
    labels: &'a LabelMap,
    strategy: Strategy,
    same_counts: Vec<u32>,
    classes: usize,
}

impl<'a> Sampler<'a> {
    pub fn new(graph: &'a Graph, labels: &'a LabelMap, strategy: Strategy) -> Sampler<'a> {
        let classes = labels.class_count();
        let mut same_counts = Vec::new();
        if matches!(strategy, Strategy::HubWalkDistribution { .. }) {
            same_counts = vec![0u32; graph.node_count() * classes];
            for x in 0..graph.node_count() {
                for &y in graph.neighbors(x) {
                    if let Some(l) = labels.get(y) {
                        same_counts[x * classes + l] += 1;
                    }
                }
            }
        }
        Sampler {
            graph,
            labels,
            strategy,
            same_counts,
            classes,
        }
    }

    pub fn step<R: Rng + ?Sized>(&self, state: &WalkState, rng: &mut R) -> Result<NodeId> {
        match self.strategy {
            Strategy::Uniform => uniform_step(self.graph, state, rng),
            Strategy::Node2vec {
                return_param,
                inout_param,
            } => node2vec_step(self.graph, state, return_param, inout_param, rng),
            Strategy::SCWalk { bias } => scwalk_step(self.graph, self.labels, state, bias, rng),
            Strategy::HubWalkDistribution { bias } => self.hub_step(state, bias, rng),
        }
    }

    fn hub_step<R: Rng + ?Sized>(&self, state: &WalkState, bias: f64, rng: &mut R) -> Result<NodeId> {
        let neighbors = neighborhood(self.graph, state.current)?;
        if rng.random::<f64>() < bias {
            if let Some(label) = self.labels.get(state.start) {
                let scores: Vec<f64> = neighbors
                    .iter()
                    .map(|&x| {
                        self.same_counts[x * self.classes + label] as f64 / self.graph.degree(x) as f64
                    })
                    .collect();
                let total: f64 = scores.iter().sum();
                if total > 0.0 {
                    return Ok(neighbors[pick_weighted(&scores, total, rng)]);
                }
            }
        }
        Ok(neighbors[rng.random_range(0..neighbors.len())])
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the independent stream for walk `walk` starting at `node`.
pub fn walk_seed(seed: u64, node: NodeId, walk: usize) -> u64 {
    mix64(mix64(seed ^ mix64(node as u64)) ^ walk as u64)
}

/// Walks in (start node, walk index) order; every walk has `walk_length`
/// nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub walks: Vec<Vec<NodeId>>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.walks.iter().map(Vec::len).sum()
    }

    /// One walk per line, space separated external ids.
    pub fn write<W: Write>(&self, graph: &Graph, mut sink: W) -> Result<()> {
        for walk in &self.walks {
            let line: Vec<&str> = walk.iter().map(|&n| graph.external_id(n)).collect();
            writeln!(sink, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(reader: R, graph: &Graph) -> Result<Corpus> {
        let mut walks = Vec::new();
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let walk = line
                .split_whitespace()
                .map(|t| graph.index_of(t).ok_or_else(|| Error::UnknownNode(t.to_string())))
                .collect::<Result<Vec<_>>>()?;
            walks.push(walk);
        }
        Ok(Corpus { walks })
    }
}

pub fn generate_walk(sampler: &Sampler<'_>, start: NodeId, length: usize, seed: u64) -> Result<Vec<NodeId>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = WalkState::new(start);
    let mut walk = Vec::with_capacity(length);
    walk.push(start);
    while walk.len() < length {
        let next = sampler.step(&state, &mut rng)?;
        state.advance(next);
        walk.push(next);
    }
    Ok(walk)
}

pub fn generate_corpus(graph: &Graph, labels: &LabelMap, config: &WalkConfig) -> Result<Corpus> {
    config.validate()?;
    if let Some(&node) = graph.isolated_nodes().first() {
        return Err(Error::IsolatedNode(graph.external_id(node).to_string()));
    }
    if labels.node_count() != graph.node_count() {
        return Err(Error::Mismatch(format!(
            "label map covers {} nodes, graph has {}",
            labels.node_count(),
            graph.node_count()
        )));
    }
    let sampler = Sampler::new(graph, labels, config.strategy);
    let walks = (0..graph.node_count())
        .into_par_iter()
        .flat_map_iter(|node| {
            let sampler = &sampler;
            (0..config.walks_per_node).map(move |i| {
                generate_walk(sampler, node, config.walk_length, walk_seed(config.seed, node, i))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus { walks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> (Graph, LabelMap) {
        let g = Graph::from_text("a b\nb c", false).unwrap();
        (g.clone(), LabelMap::unlabeled(g.node_count()))
    }

    /// c is adjacent to x, y, z; x:A, y:B, z:A; start v:A.
    fn sc_fixture() -> (Graph, LabelMap, WalkState) {
        // v reaches c through x, so N^c = {x, y, z} and S = {x, z}
        let g = Graph::from_text("v x\nc x\nc y\nc z", false).unwrap();
        let l = LabelMap::from_text("v A\nx A\ny B\nz A", &g).unwrap();
        let st = WalkState {
            start: g.index_of("v").unwrap(),
            previous: Some(g.index_of("x").unwrap()),
            current: g.index_of("c").unwrap(),
        };
        (g, l, st)
    }

    fn prob_of(g: &Graph, st: &WalkState, dist: &[f64], id: &str) -> f64 {
        let i = g.index_of(id).unwrap();
        dist[g.neighbors(st.current).iter().position(|&n| n == i).unwrap()]
    }

    #[test]
    fn node2vec_return_bias() {
        let (g, l) = path_abc();
        let st = WalkState {
            start: 0,
            previous: Some(g.index_of("a").unwrap()),
            current: g.index_of("b").unwrap(),
        };
        let s = Strategy::Node2vec {
            return_param: 0.25,
            inout_param: 4.0,
        };
        let d = transition_distribution(&g, &l, &s, &st).unwrap();
        assert!((prob_of(&g, &st, &d, "a") - 16.0 / 17.0).abs() < 1e-12);
        assert!((prob_of(&g, &st, &d, "c") - 1.0 / 17.0).abs() < 1e-12);
    }

    #[test]
    fn node2vec_unit_params_and_first_step_are_uniform() {
        let (g, l, st) = sc_fixture();
        let unit = Strategy::Node2vec {
            return_param: 1.0,
            inout_param: 1.0,
        };
        let u = transition_distribution(&g, &l, &Strategy::Uniform, &st).unwrap();
        assert_eq!(transition_distribution(&g, &l, &unit, &st).unwrap(), u);
        let first = WalkState::new(st.current);
        let skewed = Strategy::Node2vec {
            return_param: 0.25,
            inout_param: 4.0,
        };
        assert_eq!(
            transition_distribution(&g, &l, &skewed, &first).unwrap(),
            transition_distribution(&g, &l, &Strategy::Uniform, &first).unwrap()
        );
    }

    #[test]
    fn scwalk_full_bias() {
        let (g, l, st) = sc_fixture();
        let d = transition_distribution(&g, &l, &Strategy::SCWalk { bias: 1.0 }, &st).unwrap();
        assert_eq!(prob_of(&g, &st, &d, "x"), 0.5);
        assert_eq!(prob_of(&g, &st, &d, "z"), 0.5);
        assert_eq!(prob_of(&g, &st, &d, "y"), 0.0);
    }

    #[test]
    fn scwalk_half_bias_mixture() {
        // N^c = {x, y, z}, S = {x, z}
        let g = Graph::from_text("c x\nc y\nc z\nv x", false).unwrap();
        let l = LabelMap::from_text("v A\nx A\ny B\nz A", &g).unwrap();
        let st = WalkState {
            start: g.index_of("v").unwrap(),
            previous: None,
            current: g.index_of("c").unwrap(),
        };
        let d = transition_distribution(&g, &l, &Strategy::SCWalk { bias: 0.5 }, &st).unwrap();
        assert!((prob_of(&g, &st, &d, "x") - (0.25 + 0.5 / 3.0)).abs() < 1e-12);
        assert!((prob_of(&g, &st, &d, "z") - (0.25 + 0.5 / 3.0)).abs() < 1e-12);
        assert!((prob_of(&g, &st, &d, "y") - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn scwalk_no_same_label_falls_back_to_uniform() {
        let g = Graph::from_text("c x\nc y\nv x", false).unwrap();
        let l = LabelMap::from_text("v A\nx B\ny B\nc B", &g).unwrap();
        let st = WalkState {
            start: g.index_of("v").unwrap(),
            previous: Some(g.index_of("x").unwrap()),
            current: g.index_of("c").unwrap(),
        };
        let d = transition_distribution(&g, &l, &Strategy::SCWalk { bias: 1.0 }, &st).unwrap();
        assert!(d.iter().all(|&p| (p - 0.5).abs() < 1e-12));
    }

    /// N^c = {x, y}. Since c itself belongs to both N^x and N^y it is
    /// labeled like the start node: N^x = {c:A, a:A, b:B, d:B} gives H = 1/2
    /// and N^y = {c:A, e:A} gives H = 1.
    pub(crate) fn hwd_fixture() -> (Graph, LabelMap, WalkState) {
        let g = Graph::from_text("v a\nc x\nc y\nx a\nx b\nx d\ny e", false).unwrap();
        let l = LabelMap::from_text("v A\nc A\na A\nb B\nd B\ne A", &g).unwrap();
        let st = WalkState {
            start: g.index_of("v").unwrap(),
            previous: None,
            current: g.index_of("c").unwrap(),
        };
        (g, l, st)
    }

    #[test]
    fn hwd_full_bias() {
        let (g, l, st) = hwd_fixture();
        let d = transition_distribution(&g, &l, &Strategy::HubWalkDistribution { bias: 1.0 }, &st)
            .unwrap();
        assert!((prob_of(&g, &st, &d, "x") - 1.0 / 3.0).abs() < 1e-12);
        assert!((prob_of(&g, &st, &d, "y") - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hwd_zero_mass_falls_back_to_uniform() {
        let g = Graph::from_text("c x\nc y\nx q\ny r\nv s", false).unwrap();
        let l = LabelMap::from_text("v A\nq B\nr B", &g).unwrap();
        let st = WalkState {
            start: g.index_of("v").unwrap(),
            previous: None,
            current: g.index_of("c").unwrap(),
        };
        let d = transition_distribution(&g, &l, &Strategy::HubWalkDistribution { bias: 1.0 }, &st)
            .unwrap();
        assert_eq!(d, vec![0.5, 0.5]);
    }

    #[test]
    fn uniform_on_degree_four() {
        let g = Graph::from_text("c a\nc b\nc d\nc e", false).unwrap();
        let l = LabelMap::unlabeled(5);
        let d = transition_distribution(&g, &l, &Strategy::Uniform, &WalkState::new(0)).unwrap();
        assert_eq!(d, vec![0.25; 4]);
    }

    #[test]
    fn single_neighbor_is_certain() {
        let (g, _) = path_abc();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert_eq!(uniform_step(&g, &WalkState::new(0), &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn empty_neighborhood_errors() {
        let g = Graph::from_edges(vec!["a".into(), "b".into()], &[]).unwrap();
        let l = LabelMap::unlabeled(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let st = WalkState::new(0);
        assert!(matches!(uniform_step(&g, &st, &mut rng), Err(Error::IsolatedNode(_))));
        assert!(node2vec_step(&g, &st, 1.0, 1.0, &mut rng).is_err());
        assert!(scwalk_step(&g, &l, &st, 0.5, &mut rng).is_err());
        assert!(hubwalkdist_step(&g, &l, &st, 0.5, &mut rng).is_err());
        assert!(transition_distribution(&g, &l, &Strategy::Uniform, &st).is_err());
    }

    #[test]
    fn corpus_shape_and_trivial_walks() {
        let g = Graph::from_text("a b\nb c\nc a", false).unwrap();
        let l = LabelMap::unlabeled(3);
        let cfg = WalkConfig {
            walks_per_node: 1,
            walk_length: 1,
            ..Default::default()
        };
        let c = generate_corpus(&g, &l, &cfg).unwrap();
        assert_eq!(c.walks, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn self_loop_walks() {
        let g = Graph::from_text("o o", false).unwrap();
        let l = LabelMap::unlabeled(1);
        let cfg = WalkConfig {
            walks_per_node: 2,
            walk_length: 5,
            ..Default::default()
        };
        let c = generate_corpus(&g, &l, &cfg).unwrap();
        assert_eq!(c.walks, vec![vec![0; 5], vec![0; 5]]);
    }

    #[test]
    fn isolated_node_rejected() {
        let g = Graph::from_edges(vec!["a".into(), "b".into(), "o".into()], &[(0, 1)]).unwrap();
        let l = LabelMap::unlabeled(3);
        assert!(matches!(
            generate_corpus(&g, &l, &WalkConfig::default()),
            Err(Error::IsolatedNode(id)) if id == "o"
        ));
    }

    #[test]
    fn invalid_config() {
        let (g, l) = path_abc();
        let bad = WalkConfig {
            strategy: Strategy::SCWalk { bias: 1.5 },
            ..Default::default()
        };
        assert!(generate_corpus(&g, &l, &bad).is_err());
        let bad = WalkConfig {
            strategy: Strategy::Node2vec {
                return_param: 0.0,
                inout_param: 1.0,
            },
            ..Default::default()
        };
        assert!(generate_corpus(&g, &l, &bad).is_err());
        let bad = WalkConfig {
            walk_length: 0,
            ..Default::default()
        };
        assert!(generate_corpus(&g, &l, &bad).is_err());
    }

    #[test]
    fn table_sampler_matches_direct_hub_step() {
        let (g, l) = crate::datasets::karate();
        let sampler = Sampler::new(&g, &l, Strategy::HubWalkDistribution { bias: 0.7 });
        for start in 0..g.node_count() {
            let st = WalkState {
                start,
                previous: None,
                current: g.neighbors(start)[0],
            };
            let mut r1 = ChaCha8Rng::seed_from_u64(start as u64);
            let mut r2 = r1.clone();
            for _ in 0..50 {
                assert_eq!(
                    sampler.step(&st, &mut r1).unwrap(),
                    hubwalkdist_step(&g, &l, &st, 0.7, &mut r2).unwrap()
                );
            }
        }
    }

    #[test]
    fn corpus_text_round_trip() {
        let (g, l) = crate::datasets::karate();
        let cfg = WalkConfig {
            walks_per_node: 2,
            walk_length: 6,
            ..Default::default()
        };
        let c = generate_corpus(&g, &l, &cfg).unwrap();
        let mut buf = Vec::new();
        c.write(&g, &mut buf).unwrap();
        assert_eq!(Corpus::load(buf.as_slice(), &g).unwrap(), c);
    }
}
