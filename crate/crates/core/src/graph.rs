//! Labeled undirected graphs: edge-list and label-file ingestion, the
//! isolated-node self-loop rule, Table-style structural statistics and the
//! good/bad hub predicate.

use std::collections::{HashMap, VecDeque};
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Immutable undirected graph over contiguous indices `0..node_count`.
///
/// Adjacency lists are sorted and free of duplicates. A node carries a
/// self-loop only when it had no other neighbors (see
/// [`Graph::with_isolated_self_loops`]); a self-loop counts once toward the
/// node's degree and once toward the edge count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    ids: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl Graph {
    /// Parses an edge list. Each non-comment line holds two whitespace
    /// separated node tokens; `#` starts a comment line. Arcs are projected
    /// to undirected edges and duplicates collapse, so `directed_input` only
    /// documents the caller's intent.
    pub fn load<R: BufRead>(reader: R, directed_input: bool) -> Result<Graph> {
        let mut builder = GraphBuilder::default();
        let mut loops = Vec::new();
        let mut saw_edge = false;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("expected two node tokens, got `{trimmed}`"),
                    })
                }
            };
            saw_edge = true;
            let ia = builder.intern(a);
            let ib = builder.intern(b);
            if ia == ib {
                loops.push(ia);
            } else {
                builder.add_edge(ia, ib);
            }
        }
        if !saw_edge {
            return Err(Error::EmptyInput("edge list contains no edges"));
        }
        log::debug!(
            "loaded {} nodes (directed input: {directed_input})",
            builder.ids.len()
        );
        let mut graph = builder.build();
        // an explicit "o o" line keeps o in the graph; the loop itself is only
        // retained when o would otherwise be isolated
        for node in loops {
            if graph.adjacency[node].is_empty() {
                graph.adjacency[node].push(node);
            }
        }
        Ok(graph)
    }

    pub fn from_text(text: &str, directed_input: bool) -> Result<Graph> {
        Graph::load(text.as_bytes(), directed_input)
    }

    /// Builds a graph from index pairs over nodes named `ids`. Self-loop pairs
    /// are ignored.
    pub fn from_edges(ids: Vec<String>, edges: &[(NodeId, NodeId)]) -> Result<Graph> {
        let mut builder = GraphBuilder::default();
        for id in &ids {
            let before = builder.ids.len();
            if builder.intern(id) != before {
                return Err(Error::InvalidParameter(format!("duplicate node id `{id}`")));
            }
        }
        for &(a, b) in edges {
            if a >= ids.len() || b >= ids.len() {
                return Err(Error::UnknownNode(format!("{}", a.max(b))));
            }
            if a != b {
                builder.add_edge(a, b);
            }
        }
        Ok(builder.build())
    }

    /// Returns a copy in which every node with an empty neighborhood gains a
    /// single self-loop. Other adjacency is untouched.
    pub fn with_isolated_self_loops(&self) -> Graph {
        let mut graph = self.clone();
        for (node, neighbors) in graph.adjacency.iter_mut().enumerate() {
            if neighbors.is_empty() {
                neighbors.push(node);
            }
        }
        graph
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of undirected edges, self-loops counted once.
    pub fn edge_count(&self) -> usize {
        let mut twice = 0;
        let mut loops = 0;
        for (node, neighbors) in self.adjacency.iter().enumerate() {
            for &other in neighbors {
                if other == node {
                    loops += 1;
                } else {
                    twice += 1;
                }
            }
        }
        twice / 2 + loops
    }

    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn external_id(&self, node: NodeId) -> &str {
        &self.ids[node]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<NodeId> {
        self.index.get(id).copied()
    }

    pub fn isolated_nodes(&self) -> Vec<NodeId> {
        (0..self.node_count())
            .filter(|&n| self.adjacency[n].is_empty())
            .collect()
    }

    /// Each edge once (`a <= b`), in index order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a <= b).map(move |&b| (a, b)))
    }

    /// Writes the edge list with external ids; nodes without edges are
    /// not representable in this format and are dropped.
    pub fn write_edges<W: Write>(&self, mut sink: W) -> Result<()> {
        for (a, b) in self.edges() {
            writeln!(sink, "{} {}", self.ids[a], self.ids[b])?;
        }
        Ok(())
    }

    pub fn connected_components(&self) -> usize {
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::new();
        let mut components = 0;
        for start in 0..self.node_count() {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(node) = queue.pop_front() {
                for &next in &self.adjacency[node] {
                    if !seen[next] {
                        seen[next] = true;
                        queue.push_back(next);
                    }
                }
            }
        }
        components
    }
}

#[derive(Default)]
struct GraphBuilder {
    ids: Vec<String>,
    index: HashMap<String, NodeId>,
    adjacency: Vec<Vec<NodeId>>,
}

impl GraphBuilder {
    fn intern(&mut self, token: &str) -> NodeId {
        if let Some(&i) = self.index.get(token) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(token.to_string());
        self.index.insert(token.to_string(), i);
        self.adjacency.push(Vec::new());
        i
    }

    fn add_edge(&mut self, a: NodeId, b: NodeId) {
        self.adjacency[a].push(b);
        self.adjacency[b].push(a);
    }

    fn build(mut self) -> Graph {
        for neighbors in &mut self.adjacency {
            neighbors.sort_unstable();
            neighbors.dedup();
        }
        Graph {
            adjacency: self.adjacency,
            ids: self.ids,
            index: self.index,
        }
    }
}

pub type Label = usize;

/// Partial node → class assignment. Label tokens are interned to dense
/// integers in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    labels: Vec<Option<Label>>,
    class_names: Vec<String>,
}

impl LabelMap {
    pub fn unlabeled(node_count: usize) -> LabelMap {
        LabelMap {
            labels: vec![None; node_count],
            class_names: Vec::new(),
        }
    }

    /// Parses `node_token label_token` lines against `graph`.
    pub fn load<R: BufRead>(reader: R, graph: &Graph) -> Result<LabelMap> {
        let mut labels: Vec<Option<Label>> = vec![None; graph.node_count()];
        let mut class_names: Vec<String> = Vec::new();
        let mut class_index: HashMap<String, Label> = HashMap::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let (node_token, label_token) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(n), Some(l), None) => (n, l),
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("expected `node label`, got `{trimmed}`"),
                    })
                }
            };
            let node = graph
                .index_of(node_token)
                .ok_or_else(|| Error::UnknownNode(node_token.to_string()))?;
            let next = class_names.len();
            let label = *class_index.entry(label_token.to_string()).or_insert_with(|| {
                class_names.push(label_token.to_string());
                next
            });
            match labels[node] {
                Some(existing) if existing != label => {
                    return Err(Error::ConflictingLabel {
                        node: node_token.to_string(),
                        first: class_names[existing].clone(),
                        second: label_token.to_string(),
                    })
                }
                _ => labels[node] = Some(label),
            }
        }
        Ok(LabelMap {
            labels,
            class_names,
        })
    }

    pub fn from_text(text: &str, graph: &Graph) -> Result<LabelMap> {
        LabelMap::load(text.as_bytes(), graph)
    }

    /// Builds a map from dense labels; `class_count` must bound every label.
    pub fn from_labels(labels: Vec<Option<Label>>, class_count: usize) -> Result<LabelMap> {
        if let Some(bad) = labels.iter().flatten().find(|&&l| l >= class_count) {
            return Err(Error::InvalidParameter(format!(
                "label {bad} outside [0, {class_count})"
            )));
        }
        Ok(LabelMap {
            labels,
            class_names: (0..class_count).map(|c| c.to_string()).collect(),
        })
    }

    pub fn get(&self, node: NodeId) -> Option<Label> {
        self.labels[node]
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_name(&self, label: Label) -> &str {
        &self.class_names[label]
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labeled_nodes(&self) -> Vec<NodeId> {
        (0..self.labels.len())
            .filter(|&n| self.labels[n].is_some())
            .collect()
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// True only when both nodes are labeled with the same class.
    #[inline]
    pub fn same(&self, a: NodeId, b: NodeId) -> bool {
        matches!((self.labels[a], self.labels[b]), (Some(x), Some(y)) if x == y)
    }

    /// Copy that keeps labels only where `keep[node]` holds. Class ids are
    /// preserved.
    pub fn masked(&self, keep: &[bool]) -> LabelMap {
        LabelMap {
            labels: self
                .labels
                .iter()
                .zip(keep)
                .map(|(&l, &k)| if k { l } else { None })
                .collect(),
            class_names: self.class_names.clone(),
        }
    }

    pub fn write<W: Write>(&self, graph: &Graph, mut sink: W) -> Result<()> {
        for (node, label) in self.labels.iter().enumerate() {
            if let Some(l) = label {
                writeln!(sink, "{} {}", graph.external_id(node), self.class_names[*l])?;
            }
        }
        Ok(())
    }
}

/// Structural summary: N, E, C, mean/std/max degree and label count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub n_components: usize,
    pub avg_degree: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single node.
    pub std_degree: f64,
    pub max_degree: usize,
    pub n_labels: usize,
}

pub fn graph_stats(graph: &Graph, labels: &LabelMap) -> GraphStats {
    let n = graph.node_count();
    let degrees: Vec<f64> = (0..n).map(|v| graph.degree(v) as f64).collect();
    let avg = if n == 0 { 0.0 } else { degrees.iter().sum::<f64>() / n as f64 };
    let std = if n < 2 {
        0.0
    } else {
        (degrees.iter().map(|d| (d - avg).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    GraphStats {
        n_nodes: n,
        n_edges: graph.edge_count(),
        n_components: graph.connected_components(),
        avg_degree: avg,
        std_degree: std,
        max_degree: (0..n).map(|v| graph.degree(v)).max().unwrap_or(0),
        n_labels: labels.class_count(),
    }
}

/// Good-hub predicate: among the labeled neighbors of `node`, strictly more
/// share its label than do not. Unlabeled neighbors are ignored.
pub fn is_good_hub(graph: &Graph, labels: &LabelMap, node: NodeId) -> Result<bool> {
    let own = labels
        .get(node)
        .ok_or_else(|| Error::Unlabeled(graph.external_id(node).to_string()))?;
    let (mut same, mut different) = (0usize, 0usize);
    for &n in graph.neighbors(node) {
        match labels.get(n) {
            Some(l) if l == own => same += 1,
            Some(_) => different += 1,
            None => {}
        }
    }
    Ok(same > different)
}

/// Smallest degree `d` such that at least `fraction` of the nodes have
/// degree `<= d` (nearest-rank percentile).
pub fn degree_percentile(graph: &Graph, fraction: f64) -> usize {
    let mut degrees: Vec<usize> = (0..graph.node_count()).map(|v| graph.degree(v)).collect();
    if degrees.is_empty() {
        return 0;
    }
    degrees.sort_unstable();
    let rank = ((fraction.clamp(0.0, 1.0) * degrees.len() as f64).ceil() as usize).max(1);
    degrees[rank - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HubInfo {
    pub node: NodeId,
    pub degree: usize,
    pub good: bool,
}

/// Labeled nodes whose degree exceeds the given degree percentile, with
/// their good/bad classification, highest degree first.
pub fn hub_report(graph: &Graph, labels: &LabelMap, fraction: f64) -> Vec<HubInfo> {
    let cutoff = degree_percentile(graph, fraction);
    let mut hubs: Vec<HubInfo> = labels
        .labeled_nodes()
        .into_iter()
        .filter(|&v| graph.degree(v) > cutoff)
        .map(|v| HubInfo {
            node: v,
            degree: graph.degree(v),
            good: is_good_hub(graph, labels, v).unwrap_or(false),
        })
        .collect();
    hubs.sort_by(|a, b| b.degree.cmp(&a.degree).then(a.node.cmp(&b.node)));
    hubs
}
