//! Stratified k-fold cross-validation, confusion-matrix metrics and the
//! end-to-end experiment runner.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{ClassifierSpec, Dataset};
use crate::embedding::{train_sgns, Embedding, SgnsParams};
use crate::error::{Error, Result};
use crate::graph::{Graph, LabelMap, NodeId};
use crate::sampling::{generate_corpus, walk_seed, Strategy, WalkConfig};

/// Splits sample indices into `k` folds. Members of each class are shuffled
/// and dealt round-robin, continuing where the previous class stopped, so
/// per-class and overall fold sizes differ by at most one.
pub fn stratified_kfold(targets: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 folds, got {k}")));
    }
    if k > targets.len() {
        return Err(Error::InvalidParameter(format!(
            "{k} folds requested for {} samples",
            targets.len()
        )));
    }
    let classes = targets.iter().max().map_or(0, |&m| m + 1);
    let mut by_class = vec![Vec::new(); classes];
    for (i, &t) in targets.iter().enumerate() {
        by_class[t].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for members in by_class.iter_mut() {
        rand::seq::SliceRandom::shuffle(members.as_mut_slice(), &mut rng);
        for &i in members.iter() {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// `counts[i][j]`: test examples of true class `i` predicted as `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn class_count(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

pub fn confusion_matrix(truth: &[usize], predicted: &[usize], class_count: usize) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::Mismatch(format!(
            "{} true labels vs {} predictions",
            truth.len(),
            predicted.len()
        )));
    }
    let mut counts = vec![vec![0u64; class_count]; class_count];
    for (&t, &p) in truth.iter().zip(predicted) {
        if t >= class_count || p >= class_count {
            return Err(Error::InvalidParameter(format!(
                "label pair ({t}, {p}) outside [0, {class_count})"
            )));
        }
        counts[t][p] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    /// Harmonic mean of `macro_precision` and `macro_recall`.
    pub f1: f64,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
}

pub fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Accuracy, macro precision/recall over all classes (0 where a
/// denominator vanishes) and F1 of the two macro averages.
pub fn metrics_from_confusion(e: &ConfusionMatrix) -> Result<MetricReport> {
    let k = e.class_count();
    let total = e.total();
    if total == 0 {
        return Err(Error::EmptyInput("confusion matrix has no entries"));
    }
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let trace: u64 = (0..k).map(|i| e.counts[i][i]).sum();
    let precision: Vec<f64> = (0..k)
        .map(|i| ratio(e.counts[i][i], (0..k).map(|j| e.counts[j][i]).sum()))
        .collect();
    let recall: Vec<f64> = (0..k)
        .map(|i| ratio(e.counts[i][i], e.counts[i].iter().sum()))
        .collect();
    let macro_precision = precision.iter().sum::<f64>() / k as f64;
    let macro_recall = recall.iter().sum::<f64>() / k as f64;
    Ok(MetricReport {
        accuracy: trace as f64 / total as f64,
        macro_precision,
        macro_recall,
        f1: harmonic(macro_precision, macro_recall),
        precision,
        recall,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LabelPolicy {
    /// Walks see every known label, test folds included.
    #[default]
    Full,
    /// Each fold re-embeds with test-fold labels hidden from the walks.
    Masked,
}

/// Embedding method: walk strategy, walk budget, vector size and trainer
/// settings. Walk and trainer seeds come from the experiment seed list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub strategy: Strategy,
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub dimension: usize,
    pub sgns: SgnsParams,
}

impl MethodSpec {
    pub fn name(&self) -> String {
        format!("{}-d{}", self.strategy.tag(), self.dimension)
    }

    pub fn walk_config(&self, seed: u64) -> WalkConfig {
        WalkConfig {
            walks_per_node: self.walks_per_node,
            walk_length: self.walk_length,
            strategy: self.strategy,
            seed,
        }
    }

    pub fn sgns_params(&self, seed: u64) -> SgnsParams {
        SgnsParams { seed, ..self.sgns }
    }

    pub fn embed(&self, graph: &Graph, labels: &LabelMap, seed: u64) -> Result<Embedding> {
        let corpus = generate_corpus(graph, labels, &self.walk_config(seed))?;
        train_sgns(graph, &corpus, self.dimension, &self.sgns_params(seed))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub dataset: String,
    pub method: MethodSpec,
    pub classifier: ClassifierSpec,
    pub folds: usize,
    pub seeds: Vec<u64>,
    pub label_policy: LabelPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct MetricSummary {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MetricSummary {
    fn of(report: &MetricReport) -> MetricSummary {
        MetricSummary {
            accuracy: report.accuracy,
            precision: report.macro_precision,
            recall: report.macro_recall,
            f1: report.f1,
        }
    }

    fn as_array(&self) -> [f64; 4] {
        [self.accuracy, self.precision, self.recall, self.f1]
    }

    fn from_array(a: [f64; 4]) -> MetricSummary {
        MetricSummary {
            accuracy: a[0],
            precision: a[1],
            recall: a[2],
            f1: a[3],
        }
    }

    /// Arithmetic mean and population standard deviation.
    pub fn mean_std(items: &[MetricSummary]) -> (MetricSummary, MetricSummary) {
        let n = items.len().max(1) as f64;
        // sum first, divide once: ten perfect folds must average to exactly 1
        let mut mean = [0.0; 4];
        for it in items {
            for (m, v) in mean.iter_mut().zip(it.as_array()) {
                *m += v;
            }
        }
        let mean = mean.map(|m| m / n);
        let mut var = [0.0; 4];
        for it in items {
            for ((s, v), m) in var.iter_mut().zip(it.as_array()).zip(mean) {
                *s += (v - m).powi(2);
            }
        }
        (MetricSummary::from_array(mean), MetricSummary::from_array(var.map(|s| (s / n).sqrt())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub confusion: ConfusionMatrix,
    pub metrics: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    pub folds: Vec<FoldReport>,
    /// Mean over folds.
    pub mean: MetricSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub method_name: String,
    pub labeled_nodes: usize,
    pub class_count: usize,
    /// Accuracy of always predicting the most frequent class.
    pub majority_accuracy: f64,
    pub runs: Vec<SeedRun>,
    /// Mean and standard deviation of the per-seed means.
    pub mean: MetricSummary,
    pub std: MetricSummary,
}

impl ExperimentResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn evaluate_fold(
    classifier: &ClassifierSpec,
    embedding: &Embedding,
    nodes: &[NodeId],
    targets: &[usize],
    class_count: usize,
    test: &[usize],
    fold_seed: u64,
) -> Result<FoldReport> {
    let mut is_test = vec![false; nodes.len()];
    for &i in test {
        is_test[i] = true;
    }
    let train: Vec<usize> = (0..nodes.len()).filter(|&i| !is_test[i]).collect();
    let rows = |idx: &[usize]| embedding.rows(&idx.iter().map(|&i| nodes[i]).collect::<Vec<_>>());
    let train_data = Dataset::new(
        rows(&train),
        embedding.dimension(),
        train.iter().map(|&i| targets[i]).collect(),
        class_count,
    )?;
    let model = classifier.train(&train_data, fold_seed)?;
    let predicted = model.predict(&rows(test))?;
    let truth: Vec<usize> = test.iter().map(|&i| targets[i]).collect();
    let confusion = confusion_matrix(&truth, &predicted, class_count)?;
    let metrics = metrics_from_confusion(&confusion)?;
    Ok(FoldReport { confusion, metrics })
}

fn labeled_targets(labels: &LabelMap) -> Result<(Vec<NodeId>, Vec<usize>)> {
    let nodes = labels.labeled_nodes();
    let targets: Vec<usize> = nodes.iter().map(|&n| labels.get(n).expect("labeled")).collect();
    let present = {
        let mut seen = vec![false; labels.class_count()];
        targets.iter().for_each(|&t| seen[t] = true);
        seen.iter().filter(|&&s| s).count()
    };
    if present < 2 {
        return Err(Error::TooFewClasses(present));
    }
    Ok((nodes, targets))
}

fn seed_run(seed: u64, folds: Vec<FoldReport>) -> SeedRun {
    let per_fold: Vec<MetricSummary> = folds.iter().map(|r| MetricSummary::of(&r.metrics)).collect();
    let (mean, _) = MetricSummary::mean_std(&per_fold);
    SeedRun { seed, folds, mean }
}

/// Stratified k-fold evaluation of `classifier` on a fixed embedding of the
/// labeled nodes. Folds and classifier seeds derive from `seed` exactly as
/// in [`run_experiment`] under [`LabelPolicy::Full`].
pub fn cross_validate(
    embedding: &Embedding,
    labels: &LabelMap,
    classifier: &ClassifierSpec,
    folds: usize,
    seed: u64,
) -> Result<SeedRun> {
    if embedding.node_count() != labels.node_count() {
        return Err(Error::Mismatch(format!(
            "embedding has {} rows, label map {} nodes",
            embedding.node_count(),
            labels.node_count()
        )));
    }
    let (nodes, targets) = labeled_targets(labels)?;
    let class_count = labels.class_count();
    let splits = stratified_kfold(&targets, folds, seed)?;
    let reports = splits
        .par_iter()
        .enumerate()
        .map(|(f, test)| {
            evaluate_fold(classifier, embedding, &nodes, &targets, class_count, test, walk_seed(seed, f, 2))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(seed_run(seed, reports))
}

/// Embeds the graph, cross-validates the classifier over labeled nodes and
/// aggregates metrics per seed and across seeds.
pub fn run_experiment(graph: &Graph, labels: &LabelMap, spec: &ExperimentSpec) -> Result<ExperimentResult> {
    if spec.seeds.is_empty() {
        return Err(Error::InvalidParameter("experiment needs at least one seed".into()));
    }
    let (nodes, targets) = labeled_targets(labels)?;
    let class_count = labels.class_count();
    let mut freq = vec![0usize; class_count];
    for &t in &targets {
        freq[t] += 1;
    }
    let majority_accuracy = *freq.iter().max().unwrap_or(&0) as f64 / nodes.len() as f64;

    let runs = spec
        .seeds
        .iter()
        .map(|&seed| {
            let run = match spec.label_policy {
                LabelPolicy::Full => {
                    let embedding = spec.method.embed(graph, labels, seed)?;
                    cross_validate(&embedding, labels, &spec.classifier, spec.folds, seed)?
                }
                LabelPolicy::Masked => {
                    let folds = stratified_kfold(&targets, spec.folds, seed)?;
                    let reports = folds
                        .par_iter()
                        .enumerate()
                        .map(|(f, test)| {
                            let mut keep = vec![true; graph.node_count()];
                            for &i in test {
                                keep[nodes[i]] = false;
                            }
                            let visible = labels.masked(&keep);
                            let embedding = spec.method.embed(graph, &visible, seed)?;
                            evaluate_fold(
                                &spec.classifier,
                                &embedding,
                                &nodes,
                                &targets,
                                class_count,
                                test,
                                walk_seed(seed, f, 2),
                            )
                        })
                        .collect::<Result<Vec<_>>>()?;
                    seed_run(seed, reports)
                }
            };
            log::info!(
                "{} {} seed={seed} accuracy={:.4} f1={:.4}",
                spec.method.name(),
                spec.classifier.tag(),
                run.mean.accuracy,
                run.mean.f1
            );
            Ok(run)
        })
        .collect::<Result<Vec<_>>>()?;
    let per_seed: Vec<MetricSummary> = runs.iter().map(|r| r.mean).collect();
    let (mean, std) = MetricSummary::mean_std(&per_seed);
    Ok(ExperimentResult {
        spec: spec.clone(),
        method_name: spec.method.name(),
        labeled_nodes: nodes.len(),
        class_count,
        majority_accuracy,
        runs,
        mean,
        std,
    })
}

/// One row of a method-vs-baseline difference table (method minus baseline).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffRow {
    pub method: String,
    pub baseline: String,
    pub acc_diff: f64,
    pub prec_diff: f64,
    pub rec_diff: f64,
    pub f1_diff: f64,
}

pub fn compare_methods(baseline: &ExperimentResult, others: &[ExperimentResult]) -> Result<Vec<DiffRow>> {
    others
        .iter()
        .map(|r| {
            if r.spec.dataset != baseline.spec.dataset {
                return Err(Error::Mismatch(format!(
                    "dataset `{}` differs from baseline dataset `{}`",
                    r.spec.dataset, baseline.spec.dataset
                )));
            }
            if r.spec.classifier != baseline.spec.classifier {
                return Err(Error::Mismatch(format!(
                    "classifier `{}` differs from baseline classifier `{}`",
                    r.spec.classifier.tag(),
                    baseline.spec.classifier.tag()
                )));
            }
            Ok(DiffRow {
                method: r.method_name.clone(),
                baseline: baseline.method_name.clone(),
                acc_diff: r.mean.accuracy - baseline.mean.accuracy,
                prec_diff: r.mean.precision - baseline.mean.precision,
                rec_diff: r.mean.recall - baseline.mean.recall,
                f1_diff: r.mean.f1 - baseline.mean.f1,
            })
        })
        .collect()
}

pub const DIFF_HEADER: &str = "method,baseline,Acc-diff,Prec-diff,Rec-diff,F1-diff";

pub fn write_diff_csv<W: Write>(rows: &[DiffRow], mut sink: W) -> Result<()> {
    writeln!(sink, "{DIFF_HEADER}")?;
    for r in rows {
        writeln!(
            sink,
            "{},{},{:.4},{:.4},{:.4},{:.4}",
            r.method, r.baseline, r.acc_diff, r.prec_diff, r.rec_diff, r.f1_diff
        )?;
    }
    Ok(())
}
