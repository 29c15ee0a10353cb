//! Bundled datasets.

use crate::graph::{Graph, LabelMap};

pub const KARATE_EDGES: &str = include_str!("../data/karate.edges");
pub const KARATE_LABELS: &str = include_str!("../data/karate.labels");

/// Zachary's karate club with the two post-split factions as labels.
pub fn karate() -> (Graph, LabelMap) {
    let graph = Graph::from_text(KARATE_EDGES, false).expect("bundled karate edges parse");
    let labels = LabelMap::from_text(KARATE_LABELS, &graph).expect("bundled karate labels parse");
    (graph, labels)
}
