//! Command-line front end: `stats`, `synth`, `embed`, `tune`, `evaluate`.
//!
//! Every command can start from a JSON [`ExperimentConfig`]; flags given on
//! the command line replace the corresponding config fields.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classify::{ClassifierSpec, ForestParams, NbParams, SvmParams};
use crate::datasets;
use crate::embedding::{full_node2vec_grid, tune_node2vec, SgnsParams, TuneResult};
use crate::error::{Error, Result};
use crate::eval::{
    compare_methods, run_experiment, write_diff_csv, ExperimentResult, ExperimentSpec, LabelPolicy, MethodSpec,
};
use crate::graph::{graph_stats, Graph, GraphStats, LabelMap};
use crate::sampling::{Strategy, WalkConfig};
use crate::synth::{generate_planted, PlantedConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSource {
    Files {
        edges: PathBuf,
        labels: Option<PathBuf>,
        #[serde(default)]
        directed: bool,
    },
    Karate,
    Synthetic(PlantedConfig),
}

impl DatasetSource {
    pub fn name(&self) -> String {
        match self {
            DatasetSource::Files { edges, .. } => edges
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into()),
            DatasetSource::Karate => "karate".into(),
            DatasetSource::Synthetic(c) => format!("planted-n{}-k{}-s{}", c.n_nodes, c.n_classes, c.seed),
        }
    }

    /// Loads and preprocesses (self-loops on isolated nodes). A missing
    /// label file yields an empty label map.
    pub fn load(&self) -> Result<(Graph, LabelMap)> {
        let (graph, labels) = match self {
            DatasetSource::Files {
                edges,
                labels,
                directed,
            } => {
                let graph = Graph::load(BufReader::new(open(edges)?), *directed)
                    .map_err(|e| with_path(e, edges))?;
                let labels = match labels {
                    Some(path) => LabelMap::load(BufReader::new(open(path)?), &graph)
                        .map_err(|e| with_path(e, path))?,
                    None => LabelMap::unlabeled(graph.node_count()),
                };
                (graph, labels)
            }
            DatasetSource::Karate => datasets::karate(),
            DatasetSource::Synthetic(cfg) => generate_planted(cfg)?,
        };
        Ok((graph.with_isolated_self_loops(), labels))
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn with_path(err: Error, path: &Path) -> Error {
    match err {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}

/// Strategy as written in configs: a fixed strategy or node2vec tuned by
/// reconstruction error over `tune_grid`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyChoice {
    Uniform,
    Node2vec { return_param: f64, inout_param: f64 },
    Node2vecTuned,
    #[serde(rename = "scwalk")]
    SCWalk { bias: f64 },
    #[serde(rename = "hubwalk")]
    HubWalk { bias: f64 },
}

impl StrategyChoice {
    fn fixed(&self) -> Option<Strategy> {
        Some(match *self {
            StrategyChoice::Uniform => Strategy::Uniform,
            StrategyChoice::Node2vec {
                return_param,
                inout_param,
            } => Strategy::Node2vec {
                return_param,
                inout_param,
            },
            StrategyChoice::Node2vecTuned => return None,
            StrategyChoice::SCWalk { bias } => Strategy::SCWalk { bias },
            StrategyChoice::HubWalk { bias } => Strategy::HubWalkDistribution { bias },
        })
    }

    /// Family name used to pick the baseline.
    pub fn family(&self) -> &'static str {
        match self {
            StrategyChoice::Uniform => "uniform",
            StrategyChoice::Node2vec { .. } | StrategyChoice::Node2vecTuned => "node2vec",
            StrategyChoice::SCWalk { .. } => "scwalk",
            StrategyChoice::HubWalk { .. } => "hubwalk",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub strategies: Vec<StrategyChoice>,
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub dimensions: Vec<usize>,
    pub sgns: SgnsParams,
    pub classifiers: Vec<ClassifierSpec>,
    pub folds: usize,
    pub seeds: Vec<u64>,
    pub label_policy: LabelPolicy,
    pub baseline: String,
    pub tune_grid: Vec<(f64, f64)>,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: DatasetSource::Karate,
            strategies: vec![StrategyChoice::Node2vecTuned, StrategyChoice::SCWalk { bias: 0.85 }],
            walks_per_node: 10,
            walk_length: 80,
            dimensions: vec![10],
            sgns: SgnsParams::default(),
            classifiers: vec![ClassifierSpec::Svm(SvmParams::default())],
            folds: 10,
            seeds: vec![0],
            label_policy: LabelPolicy::Full,
            baseline: "node2vec".into(),
            tune_grid: full_node2vec_grid(),
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if let DatasetSource::Files { edges, labels, .. } = &self.dataset {
            for p in std::iter::once(edges).chain(labels.iter()) {
                if !p.exists() {
                    return Err(Error::InvalidParameter(format!("file {} does not exist", p.display())));
                }
            }
        }
        if self.dimensions.is_empty() || self.dimensions.contains(&0) {
            return Err(Error::InvalidParameter("dimension list must be non-empty and positive".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::InvalidParameter("no strategies configured".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidParameter("seed list is empty".into()));
        }
        for s in &self.strategies {
            if let Some(fixed) = s.fixed() {
                fixed.validate()?;
            }
        }
        self.sgns.validate()?;
        WalkConfig {
            walks_per_node: self.walks_per_node,
            walk_length: self.walk_length,
            ..Default::default()
        }
        .validate()
    }

    fn method(&self, strategy: Strategy, dimension: usize) -> MethodSpec {
        MethodSpec {
            strategy,
            walks_per_node: self.walks_per_node,
            walk_length: self.walk_length,
            dimension,
            sgns: self.sgns,
        }
    }

    /// Fixed strategy for a choice, tuning node2vec on the first seed when
    /// asked to.
    fn resolve(&self, choice: &StrategyChoice, graph: &Graph, dimension: usize) -> Result<(Strategy, Option<TuneResult>)> {
        if let Some(s) = choice.fixed() {
            return Ok((s, None));
        }
        let walks = WalkConfig {
            walks_per_node: self.walks_per_node,
            walk_length: self.walk_length,
            strategy: Strategy::Uniform,
            seed: self.seeds[0],
        };
        let sgns = SgnsParams {
            seed: self.seeds[0],
            ..self.sgns
        };
        let tuned = tune_node2vec(graph, &self.tune_grid, &walks, dimension, &sgns)?;
        let strategy = Strategy::Node2vec {
            return_param: tuned.best.return_param,
            inout_param: tuned.best.inout_param,
        };
        Ok((strategy, Some(tuned)))
    }
}

#[derive(Debug, Parser)]
#[command(name = "hubwalk", version, about = "Hub-aware random-walk embeddings and node classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print N, E, C, mean/std/max degree and label count.
    Stats(CommonArgs),
    /// Write a planted-partition graph as edge and label files.
    Synth(SynthArgs),
    /// Train embeddings for every (strategy, dimension, seed) cell.
    Embed(CommonArgs),
    /// Grid-search node2vec (return, in-out) by reconstruction error.
    Tune(CommonArgs),
    /// Cross-validate classifiers on embeddings and compare to a baseline.
    Evaluate(CommonArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Input arcs are directed; they are projected to undirected edges.
    #[arg(long)]
    pub directed: bool,
    /// Built-in dataset (`karate`).
    #[arg(long)]
    pub dataset: Option<String>,
    /// Strategies: uniform, node2vec, node2vec:P:Q, node2vec-tuned, scwalk, hubwalk.
    #[arg(long, value_delimiter = ',')]
    pub strategy: Vec<String>,
    /// Bias probabilities applied to scwalk/hubwalk strategies.
    #[arg(long = "p-bias", value_delimiter = ',')]
    pub p_bias: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub dim: Vec<usize>,
    #[arg(long)]
    pub walks: Option<usize>,
    #[arg(long = "walk-length")]
    pub walk_length: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    /// Classifiers: svm, nb, rf, rfN (N trees).
    #[arg(long, value_delimiter = ',')]
    pub classifier: Vec<String>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long = "label-policy")]
    pub label_policy: Option<String>,
    #[arg(long)]
    pub baseline: Option<String>,
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    /// Worker threads; 0 keeps training deterministic on one thread.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub classes: Option<usize>,
    #[arg(long = "p-in")]
    pub p_in: Option<f64>,
    #[arg(long = "p-out")]
    pub p_out: Option<f64>,
    #[arg(long = "hub-fraction")]
    pub hub_fraction: Option<f64>,
    #[arg(long = "hub-boost")]
    pub hub_boost: Option<f64>,
    #[arg(long = "bad-hub-fraction")]
    pub bad_hub_fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Accept p_in < p_out without a warning.
    #[arg(long = "allow-heterophily")]
    pub allow_heterophily: bool,
    #[arg(long = "out-dir", default_value = "out")]
    pub out_dir: PathBuf,
    /// Base name of the written `.edges` / `.labels` files.
    #[arg(long, default_value = "synthetic")]
    pub name: String,
}

fn parse_strategies(names: &[String], biases: &[f64]) -> Result<Vec<StrategyChoice>> {
    let mut biases = biases.to_vec();
    biases.sort_by(f64::total_cmp);
    if biases.is_empty() {
        biases.push(0.85);
    }
    let mut out = Vec::new();
    for name in names {
        let parts: Vec<&str> = name.split(':').collect();
        match parts.as_slice() {
            ["uniform"] | ["deepwalk"] => out.push(StrategyChoice::Uniform),
            ["node2vec"] => out.push(StrategyChoice::Node2vec {
                return_param: 1.0,
                inout_param: 1.0,
            }),
            ["node2vec", p, q] => out.push(StrategyChoice::Node2vec {
                return_param: parse_num(p)?,
                inout_param: parse_num(q)?,
            }),
            ["node2vec-tuned"] | ["node2vec_tuned"] => out.push(StrategyChoice::Node2vecTuned),
            ["scwalk"] => out.extend(biases.iter().map(|&bias| StrategyChoice::SCWalk { bias })),
            ["scwalk", p] => out.push(StrategyChoice::SCWalk { bias: parse_num(p)? }),
            ["hubwalk"] | ["hwd"] => out.extend(biases.iter().map(|&bias| StrategyChoice::HubWalk { bias })),
            ["hubwalk", p] | ["hwd", p] => out.push(StrategyChoice::HubWalk { bias: parse_num(p)? }),
            _ => return Err(Error::InvalidParameter(format!("unknown strategy `{name}`"))),
        }
    }
    Ok(out)
}

fn parse_num(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::InvalidParameter(format!("`{s}` is not a number")))
}

fn parse_classifier(name: &str) -> Result<ClassifierSpec> {
    Ok(match name {
        "svm" => ClassifierSpec::Svm(SvmParams::default()),
        "nb" => ClassifierSpec::NaiveBayes(NbParams::default()),
        "rf" => ClassifierSpec::RandomForest(ForestParams::default()),
        other => match other.strip_prefix("rf").and_then(|n| n.parse().ok()) {
            Some(n_estimators) => ClassifierSpec::RandomForest(ForestParams {
                n_estimators,
                ..Default::default()
            }),
            None => return Err(Error::InvalidParameter(format!("unknown classifier `{name}`"))),
        },
    })
}

/// Reads `--config` (if any) and applies flag overrides.
pub fn resolve_config(args: &CommonArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => serde_json::from_reader(BufReader::new(open(path)?))?,
        None => ExperimentConfig::default(),
    };
    if let Some(edges) = &args.edges {
        cfg.dataset = DatasetSource::Files {
            edges: edges.clone(),
            labels: args.labels.clone(),
            directed: args.directed,
        };
    } else if let Some(name) = &args.dataset {
        cfg.dataset = match name.as_str() {
            "karate" => DatasetSource::Karate,
            "planted" | "synthetic" => DatasetSource::Synthetic(PlantedConfig::default()),
            other => return Err(Error::InvalidParameter(format!("unknown dataset `{other}`"))),
        };
    }
    if !args.strategy.is_empty() {
        cfg.strategies = parse_strategies(&args.strategy, &args.p_bias)?;
    } else if !args.p_bias.is_empty() {
        // re-spread configured hub-aware strategies over the given biases
        let mut expanded = Vec::new();
        for s in &cfg.strategies {
            match s {
                StrategyChoice::SCWalk { .. } => {
                    expanded.extend(parse_strategies(&["scwalk".into()], &args.p_bias)?)
                }
                StrategyChoice::HubWalk { .. } => {
                    expanded.extend(parse_strategies(&["hubwalk".into()], &args.p_bias)?)
                }
                other => expanded.push(*other),
            }
        }
        expanded.dedup();
        cfg.strategies = expanded;
    }
    if !args.dim.is_empty() {
        cfg.dimensions = args.dim.clone();
    }
    if let Some(w) = args.walks {
        cfg.walks_per_node = w;
    }
    if let Some(l) = args.walk_length {
        cfg.walk_length = l;
    }
    if let Some(e) = args.epochs {
        cfg.sgns.epochs = e;
    }
    if let Some(w) = args.window {
        cfg.sgns.window = w;
    }
    if !args.classifier.is_empty() {
        cfg.classifiers = args.classifier.iter().map(|c| parse_classifier(c)).collect::<Result<_>>()?;
    }
    if let Some(k) = args.folds {
        cfg.folds = k;
    }
    if !args.seeds.is_empty() {
        cfg.seeds = args.seeds.clone();
    }
    if let Some(p) = &args.label_policy {
        cfg.label_policy = match p.as_str() {
            "full" => LabelPolicy::Full,
            "masked" => LabelPolicy::Masked,
            other => return Err(Error::InvalidParameter(format!("unknown label policy `{other}`"))),
        };
    }
    if let Some(b) = &args.baseline {
        cfg.baseline = b.clone();
    }
    if let Some(o) = &args.out_dir {
        cfg.out_dir = o.clone();
    }
    cfg.sgns.threads = args.threads;
    cfg.validate()?;
    Ok(cfg)
}

pub fn format_stats_header(with_labels: bool) -> String {
    let mut h = "graph\tN\tE\tC\td_mean\td_std\td_max".to_string();
    if with_labels {
        h.push_str("\tL");
    }
    h
}

pub fn format_stats_row(name: &str, s: &GraphStats, with_labels: bool) -> String {
    let mut row = format!(
        "{name}\t{}\t{}\t{}\t{:.2}\t{:.2}\t{}",
        s.n_nodes, s.n_edges, s.n_components, s.avg_degree, s.std_degree, s.max_degree
    );
    if with_labels {
        row.push_str(&format!("\t{}", s.n_labels));
    }
    row
}

pub fn cmd_stats<W: Write>(cfg: &ExperimentConfig, out: &mut W) -> Result<GraphStats> {
    let with_labels = !matches!(&cfg.dataset, DatasetSource::Files { labels: None, .. });
    if !with_labels {
        log::warn!("no label file given; label count omitted");
    }
    let (graph, labels) = cfg.dataset.load()?;
    let stats = graph_stats(&graph, &labels);
    writeln!(out, "{}", format_stats_header(with_labels))?;
    writeln!(out, "{}", format_stats_row(&cfg.dataset.name(), &stats, with_labels))?;
    Ok(stats)
}

pub fn planted_from_args(args: &SynthArgs) -> Result<PlantedConfig> {
    let mut cfg: PlantedConfig = match &args.config {
        Some(path) => serde_json::from_reader(BufReader::new(open(path)?))?,
        None => PlantedConfig::default(),
    };
    macro_rules! set {
        ($field:ident, $arg:expr) => {
            if let Some(v) = $arg {
                cfg.$field = v;
            }
        };
    }
    set!(n_nodes, args.nodes);
    set!(n_classes, args.classes);
    set!(p_in, args.p_in);
    set!(p_out, args.p_out);
    set!(hub_fraction, args.hub_fraction);
    set!(hub_degree_boost, args.hub_boost);
    set!(bad_hub_fraction, args.bad_hub_fraction);
    set!(seed, args.seed);
    cfg.validate()?;
    Ok(cfg)
}

/// Writes `<name>.edges` and `<name>.labels`; returns their paths.
pub fn cmd_synth(cfg: &PlantedConfig, allow_heterophily: bool, out_dir: &Path, name: &str) -> Result<(PathBuf, PathBuf)> {
    if cfg.p_in < cfg.p_out && !allow_heterophily {
        log::warn!(
            "p_in ({}) < p_out ({}): generating an anti-homophilous graph",
            cfg.p_in,
            cfg.p_out
        );
    }
    let (graph, labels) = generate_planted(cfg)?;
    fs::create_dir_all(out_dir)?;
    let edges = out_dir.join(format!("{name}.edges"));
    let label_path = out_dir.join(format!("{name}.labels"));
    let mut w = BufWriter::new(File::create(&edges)?);
    writeln!(w, "# planted partition: {}", serde_json::to_string(cfg)?)?;
    graph.write_edges(&mut w)?;
    w.flush()?;
    let mut w = BufWriter::new(File::create(&label_path)?);
    labels.write(&graph, &mut w)?;
    w.flush()?;
    Ok((edges, label_path))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub method: MethodSpec,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub config: ExperimentConfig,
    pub tuning: Vec<(usize, TuneResult)>,
    pub embeddings: Vec<ManifestEntry>,
    pub failures: Vec<String>,
}

/// Resolves every (strategy, dimension) cell; tuned node2vec is searched
/// once per dimension.
type Cells = Vec<(StrategyChoice, Result<MethodSpec>)>;

fn resolve_cells(cfg: &ExperimentConfig, graph: &Graph) -> (Cells, Vec<(usize, TuneResult)>) {
    let mut tuning = Vec::new();
    let mut cells = Vec::new();
    for &dim in &cfg.dimensions {
        let mut tuned: Option<Strategy> = None;
        for choice in &cfg.strategies {
            let resolved = match (choice, tuned) {
                (StrategyChoice::Node2vecTuned, Some(s)) => Ok(s),
                _ => cfg.resolve(choice, graph, dim).map(|(s, t)| {
                    if let Some(t) = t {
                        tuning.push((dim, t));
                        tuned = Some(s);
                    }
                    s
                }),
            };
            cells.push((*choice, resolved.map(|s| cfg.method(s, dim))));
        }
    }
    (cells, tuning)
}

pub fn cmd_embed(cfg: &ExperimentConfig) -> Result<Manifest> {
    let (graph, labels) = cfg.dataset.load()?;
    let dir = cfg.out_dir.join("embeddings");
    fs::create_dir_all(&dir)?;
    let (cells, tuning) = resolve_cells(cfg, &graph);
    let mut embeddings = Vec::new();
    let mut failures = Vec::new();
    for (choice, method) in cells {
        let method = match method {
            Ok(m) => m,
            Err(e) => {
                failures.push(format!("{}: {e}", choice.family()));
                continue;
            }
        };
        for &seed in &cfg.seeds {
            let file = format!("{}-s{seed}.emb", method.name());
            let result = method.embed(&graph, &labels, seed).and_then(|emb| {
                let mut w = BufWriter::new(File::create(dir.join(&file))?);
                emb.save(&mut w)?;
                w.flush()?;
                Ok(())
            });
            match result {
                Ok(()) => embeddings.push(ManifestEntry {
                    file: format!("embeddings/{file}"),
                    method,
                    seed,
                }),
                Err(e) => failures.push(format!("{}: {e}", method.name())),
            }
        }
    }
    let manifest = Manifest {
        config: cfg.clone(),
        tuning,
        embeddings,
        failures,
    };
    let mut w = BufWriter::new(File::create(cfg.out_dir.join("manifest.json"))?);
    serde_json::to_writer_pretty(&mut w, &manifest)?;
    w.flush()?;
    Ok(manifest)
}

pub fn cmd_tune<W: Write>(cfg: &ExperimentConfig, out: &mut W) -> Result<Vec<(usize, TuneResult)>> {
    let (graph, _) = cfg.dataset.load()?;
    fs::create_dir_all(&cfg.out_dir)?;
    let mut all = Vec::new();
    for &dim in &cfg.dimensions {
        let (_, tuned) = cfg.resolve(&StrategyChoice::Node2vecTuned, &graph, dim)?;
        let tuned = tuned.expect("tuning requested");
        writeln!(out, "dim\treturn\tinout\treconstruction_error")?;
        for c in &tuned.cells {
            writeln!(out, "{dim}\t{}\t{}\t{:.6}", c.return_param, c.inout_param, c.error)?;
        }
        writeln!(
            out,
            "best (dim {dim}): return={} inout={} error={:.6}",
            tuned.best.return_param, tuned.best.inout_param, tuned.best.error
        )?;
        all.push((dim, tuned));
    }
    let mut w = BufWriter::new(File::create(cfg.out_dir.join("tune.json"))?);
    serde_json::to_writer_pretty(&mut w, &all)?;
    w.flush()?;
    Ok(all)
}

/// A report file: the resolved configuration plus the result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub result: ExperimentResult,
}

#[derive(Debug)]
pub struct EvaluateOutcome {
    pub results: Vec<(StrategyChoice, ExperimentResult)>,
    pub failures: Vec<String>,
    pub diff_csv: Option<PathBuf>,
}

pub fn cmd_evaluate<W: Write>(cfg: &ExperimentConfig, out: &mut W) -> Result<EvaluateOutcome> {
    let (graph, labels) = cfg.dataset.load()?;
    let dir = cfg.out_dir.join("reports");
    fs::create_dir_all(&dir)?;
    let (cells, _) = resolve_cells(cfg, &graph);
    let mut results = Vec::new();
    let mut failures = Vec::new();
    writeln!(out, "method\tclassifier\taccuracy\tprecision\trecall\tf1")?;
    for (choice, method) in &cells {
        let method = match method {
            Ok(m) => *m,
            Err(e) => {
                failures.push(format!("{}: {e}", choice.family()));
                continue;
            }
        };
        for classifier in &cfg.classifiers {
            let spec = ExperimentSpec {
                dataset: cfg.dataset.name(),
                method,
                classifier: *classifier,
                folds: cfg.folds,
                seeds: cfg.seeds.clone(),
                label_policy: cfg.label_policy,
            };
            match run_experiment(&graph, &labels, &spec) {
                Ok(result) => {
                    let path = dir.join(format!("{}-{}.json", result.method_name, classifier.tag()));
                    let mut w = BufWriter::new(File::create(&path)?);
                    serde_json::to_writer_pretty(
                        &mut w,
                        &Report {
                            config: cfg.clone(),
                            result: result.clone(),
                        },
                    )?;
                    w.flush()?;
                    writeln!(
                        out,
                        "{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
                        result.method_name,
                        classifier.tag(),
                        result.mean.accuracy,
                        result.mean.precision,
                        result.mean.recall,
                        result.mean.f1
                    )?;
                    results.push((*choice, result));
                }
                Err(e) => failures.push(format!("{} {}: {e}", method.name(), classifier.tag())),
            }
        }
    }

    let mut rows = Vec::new();
    if results.len() > 1 {
        for (base_choice, base) in results.iter().filter(|(c, _)| c.family() == cfg.baseline) {
            let others: Vec<ExperimentResult> = results
                .iter()
                .filter(|(c, r)| {
                    c.family() != base_choice.family()
                        && r.spec.classifier == base.spec.classifier
                        && r.spec.method.dimension == base.spec.method.dimension
                })
                .map(|(_, r)| r.clone())
                .collect();
            rows.extend(compare_methods(base, &others)?);
        }
    }
    let diff_csv = if rows.is_empty() {
        None
    } else {
        let path = cfg.out_dir.join("diff.csv");
        let mut w = BufWriter::new(File::create(&path)?);
        write_diff_csv(&rows, &mut w)?;
        w.flush()?;
        write_diff_csv(&rows, &mut *out)?;
        Some(path)
    };
    Ok(EvaluateOutcome {
        results,
        failures,
        diff_csv,
    })
}

fn configure_threads(threads: usize) {
    let n = threads.max(1);
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
        log::debug!("thread pool already configured: {e}");
    }
}

/// Runs the CLI; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Stats(args) => resolve_config(&args).and_then(|cfg| {
            cmd_stats(&cfg, &mut std::io::stdout().lock())?;
            Ok(Vec::new())
        }),
        Command::Synth(args) => planted_from_args(&args).and_then(|cfg| {
            let (e, l) = cmd_synth(&cfg, args.allow_heterophily, &args.out_dir, &args.name)?;
            println!("wrote {} and {}", e.display(), l.display());
            Ok(Vec::new())
        }),
        Command::Embed(args) => {
            configure_threads(args.threads);
            resolve_config(&args).and_then(|cfg| {
                let m = cmd_embed(&cfg)?;
                println!(
                    "wrote {} embeddings and {}",
                    m.embeddings.len(),
                    cfg.out_dir.join("manifest.json").display()
                );
                Ok(m.failures)
            })
        }
        Command::Tune(args) => {
            configure_threads(args.threads);
            resolve_config(&args).and_then(|cfg| {
                cmd_tune(&cfg, &mut std::io::stdout().lock())?;
                Ok(Vec::new())
            })
        }
        Command::Evaluate(args) => {
            configure_threads(args.threads);
            resolve_config(&args).and_then(|cfg| Ok(cmd_evaluate(&cfg, &mut std::io::stdout().lock())?.failures))
        }
    };
    match outcome {
        Ok(failures) if failures.is_empty() => 0,
        Ok(failures) => {
            for f in failures {
                eprintln!("error: {f}");
            }
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
