//! Planted-partition graphs with boosted hubs, some of which are made bad
//! by pointing their extra edges across classes.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelMap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlantedConfig {
    pub n_nodes: usize,
    pub n_classes: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub hub_fraction: f64,
    pub hub_degree_boost: f64,
    pub bad_hub_fraction: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            n_nodes: 1000,
            n_classes: 4,
            p_in: 0.05,
            p_out: 0.005,
            hub_fraction: 0.05,
            hub_degree_boost: 5.0,
            bad_hub_fraction: 0.3,
            seed: 0,
        }
    }
}

impl PlantedConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")))
            }
        };
        unit("p_in", self.p_in)?;
        unit("p_out", self.p_out)?;
        unit("hub_fraction", self.hub_fraction)?;
        unit("bad_hub_fraction", self.bad_hub_fraction)?;
        if !(self.hub_degree_boost > 0.0) {
            return Err(Error::InvalidParameter("hub_degree_boost must be positive".into()));
        }
        if self.n_classes == 0 || self.n_nodes < self.n_classes {
            return Err(Error::InvalidParameter(format!(
                "need n_nodes ({}) >= n_classes ({}) >= 1",
                self.n_nodes, self.n_classes
            )));
        }
        Ok(())
    }

    pub fn is_homophilous(&self) -> bool {
        self.p_in > self.p_out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Plain,
    GoodHub,
    BadHub,
}

/// Nodes `0..n` are split into contiguous, near-equal class blocks and
/// named `1..=n`. A pair is linked with `p_in` or `p_out`; each endpoint
/// that is a good hub multiplies intra-class probabilities by the boost and
/// each bad hub multiplies inter-class probabilities, capped at 1. Isolated
/// nodes receive self-loops.
pub fn generate_planted(config: &PlantedConfig) -> Result<(Graph, LabelMap)> {
    config.validate()?;
    let n = config.n_nodes;
    let k = config.n_classes;
    let class_of: Vec<usize> = (0..n).map(|i| i * k / n).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n_hubs = (config.hub_fraction * n as f64).round() as usize;
    let n_bad = (config.bad_hub_fraction * n_hubs as f64).round() as usize;
    let mut role = vec![Role::Plain; n];
    let hubs = sample(&mut rng, n, n_hubs).into_vec();
    for (rank, &h) in hubs.iter().enumerate() {
        role[h] = if rank < n_bad { Role::BadHub } else { Role::GoodHub };
    }

    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let same = class_of[a] == class_of[b];
            let mut p = if same { config.p_in } else { config.p_out };
            for r in [role[a], role[b]] {
                match (r, same) {
                    (Role::GoodHub, true) | (Role::BadHub, false) => p *= config.hub_degree_boost,
                    _ => {}
                }
            }
            if rng.random::<f64>() < p.min(1.0) {
                edges.push((a, b));
            }
        }
    }
    let ids = (1..=n).map(|i| i.to_string()).collect();
    let graph = Graph::from_edges(ids, &edges)?.with_isolated_self_loops();
    let labels = LabelMap::from_labels(class_of.into_iter().map(Some).collect(), k)?;
    Ok((graph, labels))
}
