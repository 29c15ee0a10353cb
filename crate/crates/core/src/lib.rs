//! Hub-aware random-walk node embeddings for node classification.
//!
//! The pipeline is: load a labeled graph ([`graph`]), sample a walk corpus
//! with one of four strategies ([`sampling`]), train skip-gram vectors
//! ([`embedding`]), then cross-validate a classifier on the labeled nodes
//! ([`classify`], [`eval`]). [`synth`] generates labeled test graphs.

pub mod classify;
pub mod cli;
pub mod datasets;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod graph;
pub mod sampling;
pub mod synth;

pub use classify::{ClassifierSpec, Dataset, ForestParams, NbParams, SvmParams, TrainedModel};
pub use embedding::{Embedding, SgnsParams};
pub use error::{Error, Result};
pub use eval::{ExperimentResult, ExperimentSpec, LabelPolicy, MethodSpec};
pub use graph::{Graph, GraphStats, LabelMap, NodeId};
pub use sampling::{Corpus, Strategy, WalkConfig, WalkState};
pub use synth::PlantedConfig;
