//! Python module `pyhubwalk`: load or generate labeled graphs, sample walks,
//! train skip-gram embeddings and cross-validate classifiers.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use hubwalk::classify::{ClassifierSpec, ForestParams, NbParams, SvmParams};
use hubwalk::embedding::{full_node2vec_grid, train_sgns, tune_node2vec};
use hubwalk::eval::{confusion_matrix, cross_validate, metrics_from_confusion, MethodSpec};
use hubwalk::graph::graph_stats;
use hubwalk::sampling::generate_corpus;
use hubwalk::{Embedding, Graph, LabelMap, PlantedConfig, SgnsParams, Strategy, WalkConfig};
use pyo3::exceptions::{PyIOError, PyKeyError, PyValueError};
use pyo3::prelude::*;

fn err(e: hubwalk::Error) -> PyErr {
    match e {
        hubwalk::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn io_err(e: std::io::Error) -> PyErr {
    PyIOError::new_err(e.to_string())
}

/// Undirected graph with optional node labels.
#[pyclass(name = "Graph", module = "pyhubwalk")]
struct PyGraph {
    graph: Graph,
    labels: LabelMap,
}

impl PyGraph {
    fn new(graph: Graph, labels: LabelMap) -> PyGraph {
        PyGraph {
            graph: graph.with_isolated_self_loops(),
            labels,
        }
    }
}

#[pymethods]
impl PyGraph {
    #[staticmethod]
    #[pyo3(signature = (edges, labels=None, directed=false))]
    fn from_files(edges: &str, labels: Option<&str>, directed: bool) -> PyResult<PyGraph> {
        let graph = Graph::load(BufReader::new(File::open(edges).map_err(io_err)?), directed).map_err(err)?;
        let labels = match labels {
            Some(p) => LabelMap::load(BufReader::new(File::open(p).map_err(io_err)?), &graph).map_err(err)?,
            None => LabelMap::unlabeled(graph.node_count()),
        };
        Ok(PyGraph::new(graph, labels))
    }

    #[staticmethod]
    #[pyo3(signature = (edges, labels=None, directed=false))]
    fn from_text(edges: &str, labels: Option<&str>, directed: bool) -> PyResult<PyGraph> {
        let graph = Graph::from_text(edges, directed).map_err(err)?;
        let labels = match labels {
            Some(t) => LabelMap::from_text(t, &graph).map_err(err)?,
            None => LabelMap::unlabeled(graph.node_count()),
        };
        Ok(PyGraph::new(graph, labels))
    }

    #[staticmethod]
    fn karate() -> PyGraph {
        let (g, l) = hubwalk::datasets::karate();
        PyGraph::new(g, l)
    }

    #[staticmethod]
    #[pyo3(signature = (n_nodes=1000, n_classes=4, p_in=0.05, p_out=0.005, hub_fraction=0.05,
                        hub_degree_boost=5.0, bad_hub_fraction=0.3, seed=0))]
    #[allow(clippy::too_many_arguments)]
    fn planted(
        n_nodes: usize,
        n_classes: usize,
        p_in: f64,
        p_out: f64,
        hub_fraction: f64,
        hub_degree_boost: f64,
        bad_hub_fraction: f64,
        seed: u64,
    ) -> PyResult<PyGraph> {
        let (g, l) = hubwalk::synth::generate_planted(&PlantedConfig {
            n_nodes,
            n_classes,
            p_in,
            p_out,
            hub_fraction,
            hub_degree_boost,
            bad_hub_fraction,
            seed,
        })
        .map_err(err)?;
        Ok(PyGraph::new(g, l))
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.graph.ids().to_vec()
    }

    fn neighbors(&self, id: &str) -> PyResult<Vec<String>> {
        let v = self.index(id)?;
        Ok(self.graph.neighbors(v).iter().map(|&u| self.graph.external_id(u).to_string()).collect())
    }

    /// Class name per node id; unlabeled nodes are omitted.
    fn labels(&self) -> HashMap<String, String> {
        (0..self.graph.node_count())
            .filter_map(|v| {
                self.labels
                    .get(v)
                    .map(|l| (self.graph.external_id(v).to_string(), self.labels.class_name(l).to_string()))
            })
            .collect()
    }

    fn stats(&self) -> HashMap<&'static str, f64> {
        let s = graph_stats(&self.graph, &self.labels);
        HashMap::from([
            ("nodes", s.n_nodes as f64),
            ("edges", s.n_edges as f64),
            ("components", s.n_components as f64),
            ("avg_degree", s.avg_degree),
            ("std_degree", s.std_degree),
            ("max_degree", s.max_degree as f64),
            ("labels", s.n_labels as f64),
        ])
    }

    /// Random walks as lists of node ids.
    #[pyo3(signature = (strategy, walks_per_node=10, walk_length=80, seed=0))]
    fn walks(&self, strategy: &PyStrategy, walks_per_node: usize, walk_length: usize, seed: u64) -> PyResult<Vec<Vec<String>>> {
        let corpus = generate_corpus(
            &self.graph,
            &self.labels,
            &WalkConfig {
                walks_per_node,
                walk_length,
                strategy: strategy.inner,
                seed,
            },
        )
        .map_err(err)?;
        Ok(corpus
            .walks
            .iter()
            .map(|w| w.iter().map(|&v| self.graph.external_id(v).to_string()).collect())
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(nodes={}, edges={}, labeled={})",
            self.graph.node_count(),
            self.graph.edge_count(),
            self.labels.labeled_count()
        )
    }
}

impl PyGraph {
    fn index(&self, id: &str) -> PyResult<usize> {
        self.graph
            .index_of(id)
            .ok_or_else(|| PyKeyError::new_err(format!("unknown node `{id}`")))
    }
}

/// Walk strategy. Build with the static constructors.
#[pyclass(name = "Strategy", module = "pyhubwalk", frozen)]
struct PyStrategy {
    inner: Strategy,
}

#[pymethods]
impl PyStrategy {
    #[staticmethod]
    fn uniform() -> PyStrategy {
        PyStrategy { inner: Strategy::Uniform }
    }

    #[staticmethod]
    #[pyo3(signature = (return_param=1.0, inout_param=1.0))]
    fn node2vec(return_param: f64, inout_param: f64) -> PyResult<PyStrategy> {
        PyStrategy::checked(Strategy::Node2vec {
            return_param,
            inout_param,
        })
    }

    #[staticmethod]
    fn scwalk(bias: f64) -> PyResult<PyStrategy> {
        PyStrategy::checked(Strategy::SCWalk { bias })
    }

    #[staticmethod]
    fn hubwalk(bias: f64) -> PyResult<PyStrategy> {
        PyStrategy::checked(Strategy::HubWalkDistribution { bias })
    }

    #[getter]
    fn tag(&self) -> String {
        self.inner.tag()
    }

    fn __repr__(&self) -> String {
        format!("Strategy({})", self.inner.tag())
    }
}

impl PyStrategy {
    fn checked(inner: Strategy) -> PyResult<PyStrategy> {
        inner.validate().map_err(err)?;
        Ok(PyStrategy { inner })
    }
}

#[pyclass(name = "Embedding", module = "pyhubwalk", frozen)]
struct PyEmbedding {
    inner: Embedding,
}

#[pymethods]
impl PyEmbedding {
    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.ids().to_vec()
    }

    /// Row-major vectors in node order.
    fn vectors(&self) -> Vec<Vec<f64>> {
        self.inner.as_slice().chunks(self.inner.dimension()).map(|r| r.to_vec()).collect()
    }

    fn vector(&self, id: &str) -> PyResult<Vec<f64>> {
        let v = self
            .inner
            .ids()
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| PyKeyError::new_err(format!("unknown node `{id}`")))?;
        Ok(self.inner.vector(v).to_vec())
    }

    fn save(&self, path: &str) -> PyResult<()> {
        let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
        self.inner.save(&mut w).map_err(err)?;
        w.flush().map_err(io_err)
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }
}

fn sgns(epochs: usize, window: usize, negatives: usize, seed: u64, threads: usize) -> SgnsParams {
    SgnsParams {
        epochs,
        window,
        negatives,
        seed,
        threads,
        ..Default::default()
    }
}

/// Samples walks with `strategy` and trains skip-gram vectors on them.
#[pyfunction]
#[pyo3(signature = (graph, strategy, dimension=128, walks_per_node=10, walk_length=80,
                    epochs=5, window=10, negatives=5, seed=0, threads=0))]
#[allow(clippy::too_many_arguments)]
fn embed(
    graph: &PyGraph,
    strategy: &PyStrategy,
    dimension: usize,
    walks_per_node: usize,
    walk_length: usize,
    epochs: usize,
    window: usize,
    negatives: usize,
    seed: u64,
    threads: usize,
) -> PyResult<PyEmbedding> {
    let method = MethodSpec {
        strategy: strategy.inner,
        walks_per_node,
        walk_length,
        dimension,
        sgns: sgns(epochs, window, negatives, seed, threads),
    };
    let corpus = generate_corpus(&graph.graph, &graph.labels, &method.walk_config(seed)).map_err(err)?;
    let inner = train_sgns(&graph.graph, &corpus, dimension, &method.sgns_params(seed)).map_err(err)?;
    Ok(PyEmbedding { inner })
}

/// Grid search over node2vec (return, in-out) by reconstruction error.
/// Returns `(return_param, inout_param, error)`.
#[pyfunction]
#[pyo3(signature = (graph, dimension=128, walks_per_node=10, walk_length=80, epochs=5, seed=0))]
fn tune(
    graph: &PyGraph,
    dimension: usize,
    walks_per_node: usize,
    walk_length: usize,
    epochs: usize,
    seed: u64,
) -> PyResult<(f64, f64, f64)> {
    let walks = WalkConfig {
        walks_per_node,
        walk_length,
        strategy: Strategy::Uniform,
        seed,
    };
    let r = tune_node2vec(&graph.graph, &full_node2vec_grid(), &walks, dimension, &sgns(epochs, 10, 5, seed, 0))
        .map_err(err)?;
    Ok((r.best.return_param, r.best.inout_param, r.best.error))
}

fn classifier(name: &str) -> PyResult<ClassifierSpec> {
    Ok(match name {
        "svm" => ClassifierSpec::Svm(SvmParams::default()),
        "nb" => ClassifierSpec::NaiveBayes(NbParams::default()),
        "rf" => ClassifierSpec::RandomForest(ForestParams::default()),
        other => match other.strip_prefix("rf").and_then(|n| n.parse().ok()) {
            Some(n_estimators) => ClassifierSpec::RandomForest(ForestParams {
                n_estimators,
                ..Default::default()
            }),
            None => return Err(PyValueError::new_err(format!("unknown classifier `{name}`"))),
        },
    })
}

/// Stratified k-fold cross-validation on the labeled nodes of `graph`.
/// Returns the fold-mean accuracy, precision, recall and F1.
#[pyfunction]
#[pyo3(signature = (embedding, graph, classifier_name="svm", folds=10, seed=0))]
fn evaluate(
    embedding: &PyEmbedding,
    graph: &PyGraph,
    classifier_name: &str,
    folds: usize,
    seed: u64,
) -> PyResult<HashMap<&'static str, f64>> {
    let run = cross_validate(&embedding.inner, &graph.labels, &classifier(classifier_name)?, folds, seed)
        .map_err(err)?;
    let m = run.mean;
    Ok(HashMap::from([
        ("accuracy", m.accuracy),
        ("precision", m.precision),
        ("recall", m.recall),
        ("f1", m.f1),
    ]))
}

/// Accuracy, macro precision/recall and their harmonic mean.
#[pyfunction]
fn metrics(truth: Vec<usize>, predicted: Vec<usize>, class_count: usize) -> PyResult<HashMap<&'static str, f64>> {
    let r = metrics_from_confusion(&confusion_matrix(&truth, &predicted, class_count).map_err(err)?).map_err(err)?;
    Ok(HashMap::from([
        ("accuracy", r.accuracy),
        ("precision", r.macro_precision),
        ("recall", r.macro_recall),
        ("f1", r.f1),
    ]))
}

#[pymodule]
fn pyhubwalk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyStrategy>()?;
    m.add_class::<PyEmbedding>()?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(tune, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(metrics, m)?)?;
    Ok(())
}
