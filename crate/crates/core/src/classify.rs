//! Downstream classifiers trained on node vectors: one-vs-rest linear SVM,
//! Gaussian naive Bayes and a Gini random forest.
//!
//! Every argmax in this module resolves ties toward the lower class index.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::walk_seed;

/// Row-major feature matrix with one class label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    dimension: usize,
    targets: Vec<usize>,
    class_count: usize,
}

impl Dataset {
    pub fn new(features: Vec<f64>, dimension: usize, targets: Vec<usize>, class_count: usize) -> Result<Dataset> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("feature dimension must be positive".into()));
        }
        if features.len() != targets.len() * dimension {
            return Err(Error::Mismatch(format!(
                "{} feature values do not form {} rows of dimension {dimension}",
                features.len(),
                targets.len()
            )));
        }
        check_finite(&features, dimension)?;
        if let Some(&t) = targets.iter().find(|&&t| t >= class_count) {
            return Err(Error::InvalidParameter(format!("target {t} outside [0, {class_count})")));
        }
        Ok(Dataset {
            features,
            dimension,
            targets,
            class_count,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            features: rows.iter().flat_map(|&r| self.row(r).iter().copied()).collect(),
            dimension: self.dimension,
            targets: rows.iter().map(|&r| self.targets[r]).collect(),
            class_count: self.class_count,
        }
    }

    fn present_classes(&self) -> usize {
        let mut seen = vec![false; self.class_count];
        for &t in &self.targets {
            seen[t] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }

    fn require_two_classes(&self) -> Result<()> {
        match self.present_classes() {
            n if n >= 2 => Ok(()),
            n => Err(Error::TooFewClasses(n)),
        }
    }
}

fn check_finite(values: &[f64], dimension: usize) -> Result<()> {
    match values.iter().position(|x| !x.is_finite()) {
        Some(pos) => Err(Error::NonFinite {
            row: pos / dimension,
            col: pos % dimension,
        }),
        None => Ok(()),
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Per-feature standardization fitted on training rows. Constant features
/// keep unit scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(data: &Dataset) -> Standardizer {
        let d = data.dimension;
        let n = data.len().max(1) as f64;
        let mut mean = vec![0.0; d];
        for i in 0..data.len() {
            for (m, x) in mean.iter_mut().zip(data.row(i)) {
                *m += x / n;
            }
        }
        let mut var = vec![0.0; d];
        for i in 0..data.len() {
            for ((v, x), m) in var.iter_mut().zip(data.row(i)).zip(&mean) {
                *v += (x - m).powi(2) / n;
            }
        }
        let scale = var
            .into_iter()
            .map(|v| if v > 1e-24 { v.sqrt() } else { 1.0 })
            .collect();
        Standardizer { mean, scale }
    }

    pub fn transform_row(&self, row: &[f64], out: &mut [f64]) {
        for (((o, x), m), s) in out.iter_mut().zip(row).zip(&self.mean).zip(&self.scale) {
            *o = (x - m) / s;
        }
    }

    fn transform(&self, data: &Dataset) -> Dataset {
        let mut features = vec![0.0; data.features.len()];
        for (i, out) in features.chunks_mut(data.dimension).enumerate() {
            self.transform_row(data.row(i), out);
        }
        Dataset {
            features,
            ..data.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub epochs: usize,
    pub regularization: f64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            epochs: 30,
            regularization: 1e-3,
        }
    }
}

/// One-vs-rest linear SVM. Each class gets a weight vector over
/// standardized features plus a bias (last component).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvm {
    standardizer: Standardizer,
    weights: Vec<Vec<f64>>,
}

impl LinearSvm {
    pub fn decision_values(&self, row: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; row.len()];
        self.standardizer.transform_row(row, &mut z);
        self.weights
            .iter()
            .map(|w| {
                let (bias, coef) = w.split_last().expect("weights include bias");
                coef.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() + bias
            })
            .collect()
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        argmax(&self.decision_values(row))
    }

    /// Same model with every decision weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> LinearSvm {
        LinearSvm {
            standardizer: self.standardizer.clone(),
            weights: self
                .weights
                .iter()
                .map(|w| w.iter().map(|x| x * factor).collect())
                .collect(),
        }
    }
}

/// Stochastic subgradient descent (Pegasos step size `1/(λt)`, projection
/// onto the `1/sqrt(λ)` ball) on the L2-regularized hinge loss. The bias is
/// a constant feature and is regularized with the rest. The returned
/// weights average the iterates of the second half of training.
pub fn train_linear_svm(data: &Dataset, params: &SvmParams, seed: u64) -> Result<LinearSvm> {
    data.require_two_classes()?;
    if params.epochs == 0 || params.regularization <= 0.0 {
        return Err(Error::InvalidParameter(
            "svm needs positive epochs and regularization".into(),
        ));
    }
    let standardizer = Standardizer::fit(data);
    let z = standardizer.transform(data);
    let d = z.dimension + 1;
    let lambda = params.regularization;
    let radius = 1.0 / lambda.sqrt();
    let total = params.epochs * z.len();
    let average_from = total / 2;

    let weights = (0..z.class_count)
        .map(|class| {
            let mut rng = ChaCha8Rng::seed_from_u64(walk_seed(seed, class, 0));
            let mut w = vec![0.0; d];
            let mut avg = vec![0.0; d];
            let mut averaged = 0usize;
            let mut order: Vec<usize> = (0..z.len()).collect();
            let mut t = 0usize;
            for _ in 0..params.epochs {
                shuffle(&mut order, &mut rng);
                for &i in &order {
                    t += 1;
                    let eta = 1.0 / (lambda * t as f64);
                    let y = if z.targets[i] == class { 1.0 } else { -1.0 };
                    let x = z.row(i);
                    let margin = y * (x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() + w[d - 1]);
                    let shrink = 1.0 - eta * lambda;
                    w.iter_mut().for_each(|v| *v *= shrink);
                    if margin < 1.0 {
                        for (wj, xj) in w.iter_mut().zip(x) {
                            *wj += eta * y * xj;
                        }
                        w[d - 1] += eta * y;
                    }
                    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm > radius {
                        w.iter_mut().for_each(|v| *v *= radius / norm);
                    }
                    if t > average_from {
                        averaged += 1;
                        for (a, v) in avg.iter_mut().zip(&w) {
                            *a += (v - *a) / averaged as f64;
                        }
                    }
                }
            }
            avg
        })
        .collect();
    Ok(LinearSvm { standardizer, weights })
}

fn shuffle<R: Rng>(items: &mut [usize], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    pub variance_floor: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams { variance_floor: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    standardizer: Standardizer,
    log_prior: Vec<f64>,
    mean: Vec<Vec<f64>>,
    var: Vec<Vec<f64>>,
}

impl GaussianNb {
    /// Unnormalized log-posterior per class; classes absent from training
    /// score `-inf`.
    pub fn log_posteriors(&self, row: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; row.len()];
        self.standardizer.transform_row(row, &mut z);
        self.log_prior
            .iter()
            .enumerate()
            .map(|(c, &prior)| {
                if prior == f64::NEG_INFINITY {
                    return prior;
                }
                prior
                    + z.iter()
                        .zip(&self.mean[c])
                        .zip(&self.var[c])
                        .map(|((x, m), v)| -0.5 * ((2.0 * std::f64::consts::PI * v).ln() + (x - m).powi(2) / v))
                        .sum::<f64>()
            })
            .collect()
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        argmax(&self.log_posteriors(row))
    }
}

pub fn train_gaussian_nb(data: &Dataset, params: &NbParams) -> Result<GaussianNb> {
    data.require_two_classes()?;
    if params.variance_floor <= 0.0 {
        return Err(Error::InvalidParameter("variance floor must be positive".into()));
    }
    let standardizer = Standardizer::fit(data);
    let z = standardizer.transform(data);
    let (k, d) = (z.class_count, z.dimension);
    let mut counts = vec![0usize; k];
    let mut mean = vec![vec![0.0; d]; k];
    let mut var = vec![vec![0.0; d]; k];
    for i in 0..z.len() {
        let c = z.targets[i];
        counts[c] += 1;
        for (m, x) in mean[c].iter_mut().zip(z.row(i)) {
            *m += x;
        }
    }
    for c in 0..k {
        if counts[c] > 0 {
            mean[c].iter_mut().for_each(|m| *m /= counts[c] as f64);
        }
    }
    for i in 0..z.len() {
        let c = z.targets[i];
        for ((v, x), m) in var[c].iter_mut().zip(z.row(i)).zip(&mean[c]) {
            *v += (x - m).powi(2);
        }
    }
    for c in 0..k {
        for v in var[c].iter_mut() {
            *v = (*v / counts[c].max(1) as f64).max(params.variance_floor);
        }
    }
    let n = z.len() as f64;
    let log_prior = counts
        .iter()
        .map(|&c| if c == 0 { f64::NEG_INFINITY } else { (c as f64 / n).ln() })
        .collect();
    Ok(GaussianNb {
        standardizer,
        log_prior,
        mean,
        var,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// `ceil(sqrt(dimension))` candidates per split.
    Sqrt,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
    pub max_features: MaxFeatures,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_estimators: 100,
            max_depth: None,
            bootstrap: true,
            max_features: MaxFeatures::Sqrt,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TreeNode {
    Leaf(usize),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// CART classification tree with Gini splits.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<TreeNode>,
}

#[derive(Debug, Clone, Copy)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub max_features: MaxFeatures,
}

impl DecisionTree {
    /// Grows a tree on `rows` of `data`. Nodes stop splitting when pure,
    /// at `max_depth`, below two samples, or when no candidate feature
    /// separates the samples.
    pub fn fit(data: &Dataset, rows: &[usize], params: &TreeParams, seed: u64) -> Result<DecisionTree> {
        if rows.is_empty() {
            return Err(Error::EmptyInput("decision tree needs at least one sample"));
        }
        let mut tree = DecisionTree { nodes: Vec::new() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = rows.to_vec();
        let mut scratch = Vec::with_capacity(rows.len());
        tree.grow(data, &mut rows, 0, params, &mut rng, &mut scratch);
        Ok(tree)
    }

    fn grow(
        &mut self,
        data: &Dataset,
        rows: &mut [usize],
        depth: usize,
        params: &TreeParams,
        rng: &mut ChaCha8Rng,
        scratch: &mut Vec<(f64, usize)>,
    ) -> usize {
        let k = data.class_count;
        let mut counts = vec![0usize; k];
        for &r in rows.iter() {
            counts[data.targets[r]] += 1;
        }
        let majority = argmax(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>());
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf(majority));
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || rows.len() < 2 || params.max_depth.is_some_and(|m| depth >= m) {
            return id;
        }

        let d = data.dimension;
        let candidates: Vec<usize> = match params.max_features {
            MaxFeatures::All => (0..d).collect(),
            MaxFeatures::Sqrt => {
                let m = ((d as f64).sqrt().ceil() as usize).clamp(1, d);
                sample(rng, d, m).into_vec()
            }
        };
        let n = rows.len() as f64;
        let mut best: Option<(f64, usize, f64)> = None;
        for &f in &candidates {
            scratch.clear();
            scratch.extend(rows.iter().map(|&r| (data.row(r)[f], data.targets[r])));
            scratch.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left = vec![0usize; k];
            let mut left_sq = 0.0;
            let mut right = counts.clone();
            let mut right_sq: f64 = counts.iter().map(|&c| (c * c) as f64).sum();
            for i in 0..scratch.len() - 1 {
                let c = scratch[i].1;
                left_sq += (2 * left[c] + 1) as f64;
                left[c] += 1;
                right_sq -= (2 * right[c] - 1) as f64;
                right[c] -= 1;
                if scratch[i].0 == scratch[i + 1].0 {
                    continue;
                }
                let nl = (i + 1) as f64;
                let nr = n - nl;
                // weighted Gini = nl (1 - Σ pl²) + nr (1 - Σ pr²), scaled by 1/n
                let impurity = (nl - left_sq / nl) + (nr - right_sq / nr);
                if best.is_none_or(|(b, _, _)| impurity < b) {
                    let threshold = scratch[i].0 + (scratch[i + 1].0 - scratch[i].0) / 2.0;
                    best = Some((impurity, f, threshold));
                }
            }
        }
        let Some((_, feature, threshold)) = best else {
            return id;
        };
        let mut split = 0;
        for i in 0..rows.len() {
            if data.row(rows[i])[feature] <= threshold {
                rows.swap(i, split);
                split += 1;
            }
        }
        let (l_rows, r_rows) = rows.split_at_mut(split);
        let left = self.grow(data, l_rows, depth + 1, params, rng, scratch);
        let right = self.grow(data, r_rows, depth + 1, params, rng, scratch);
        self.nodes[id] = TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                TreeNode::Leaf(class) => return class,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
    class_count: usize,
}

impl RandomForest {
    pub fn predict_row(&self, row: &[f64]) -> usize {
        let mut votes = vec![0.0; self.class_count];
        for tree in &self.trees {
            votes[tree.predict_row(row)] += 1.0;
        }
        argmax(&votes)
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }
}

/// Tree `i` draws from its own stream keyed by `(seed, i)`, so a forest of
/// `n` trees is a prefix of any larger forest with the same seed.
pub fn train_random_forest(data: &Dataset, params: &ForestParams, seed: u64) -> Result<RandomForest> {
    data.require_two_classes()?;
    if params.n_estimators == 0 {
        return Err(Error::InvalidParameter("random forest needs at least one tree".into()));
    }
    let tree_params = TreeParams {
        max_depth: params.max_depth,
        max_features: params.max_features,
    };
    let n = data.len();
    let trees = (0..params.n_estimators)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(walk_seed(seed, i, 1));
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            DecisionTree::fit(data, &rows, &tree_params, rng.random())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RandomForest {
        trees,
        class_count: data.class_count,
    })
}

/// Classifier choice plus its hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifierSpec {
    Svm(SvmParams),
    NaiveBayes(NbParams),
    RandomForest(ForestParams),
}

impl ClassifierSpec {
    pub fn tag(&self) -> String {
        match self {
            ClassifierSpec::Svm(_) => "svm".into(),
            ClassifierSpec::NaiveBayes(_) => "nb".into(),
            ClassifierSpec::RandomForest(p) => format!("rf{}", p.n_estimators),
        }
    }

    pub fn train(&self, data: &Dataset, seed: u64) -> Result<TrainedModel> {
        let model = match self {
            ClassifierSpec::Svm(p) => Model::Svm(train_linear_svm(data, p, seed)?),
            ClassifierSpec::NaiveBayes(p) => Model::NaiveBayes(train_gaussian_nb(data, p)?),
            ClassifierSpec::RandomForest(p) => Model::Forest(train_random_forest(data, p, seed)?),
        };
        Ok(TrainedModel {
            model,
            dimension: data.dimension,
            class_count: data.class_count,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Svm(LinearSvm),
    NaiveBayes(GaussianNb),
    Forest(RandomForest),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub model: Model,
    pub dimension: usize,
    pub class_count: usize,
}

impl TrainedModel {
    /// One label per row of the row-major `features` matrix.
    pub fn predict(&self, features: &[f64]) -> Result<Vec<usize>> {
        if !features.len().is_multiple_of(self.dimension) {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: features.len() % self.dimension,
            });
        }
        check_finite(features, self.dimension)?;
        Ok(features
            .chunks(self.dimension)
            .map(|row| match &self.model {
                Model::Svm(m) => m.predict_row(row),
                Model::NaiveBayes(m) => m.predict_row(row),
                Model::Forest(m) => m.predict_row(row),
            })
            .collect())
    }

    pub fn predict_rows(&self, rows: &[Vec<f64>]) -> Result<Vec<usize>> {
        if let Some(r) = rows.iter().find(|r| r.len() != self.dimension) {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: r.len(),
            });
        }
        self.predict(&rows.concat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Normal};

    fn blobs(centers: &[(f64, f64)], per_class: usize, std: f64, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, std).unwrap();
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (c, &(cx, cy)) in centers.iter().enumerate() {
            for _ in 0..per_class {
                x.push(cx + noise.sample(&mut rng));
                x.push(cy + noise.sample(&mut rng));
                y.push(c);
            }
        }
        Dataset::new(x, 2, y, centers.len()).unwrap()
    }

    fn accuracy(model: &TrainedModel, data: &Dataset) -> f64 {
        let pred = model.predict(data.features()).unwrap();
        pred.iter().zip(data.targets()).filter(|(a, b)| a == b).count() as f64 / data.len() as f64
    }

    #[test]
    fn svm_separable_blobs() {
        for seed in 0..5 {
            let data = blobs(&[(-3.0, 0.0), (3.0, 0.0)], 50, 0.5, seed);
            let m = ClassifierSpec::Svm(SvmParams::default()).train(&data, seed).unwrap();
            assert!(accuracy(&m, &data) >= 0.98, "seed {seed}");
        }
    }

    #[test]
    fn svm_square_corners() {
        let data = Dataset::new(
            vec![1.0, 1.0, -1.0, 1.0, -1.0, -1.0, 1.0, -1.0],
            2,
            vec![0, 1, 2, 3],
            4,
        )
        .unwrap();
        let m = ClassifierSpec::Svm(SvmParams::default()).train(&data, 3).unwrap();
        assert_eq!(accuracy(&m, &data), 1.0);
    }

    #[test]
    fn svm_identical_features_predict_majority() {
        let data = Dataset::new(vec![0.7; 10], 1, vec![1, 1, 1, 0, 1, 1, 0, 1, 1, 1], 2).unwrap();
        let m = ClassifierSpec::Svm(SvmParams::default()).train(&data, 0).unwrap();
        assert_eq!(m.predict(&[0.7, 0.7]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn single_class_is_rejected() {
        let data = Dataset::new(vec![0.0, 1.0, 2.0], 1, vec![0, 0, 0], 2).unwrap();
        for spec in [
            ClassifierSpec::Svm(SvmParams::default()),
            ClassifierSpec::NaiveBayes(NbParams::default()),
            ClassifierSpec::RandomForest(ForestParams::default()),
        ] {
            assert!(matches!(spec.train(&data, 0), Err(Error::TooFewClasses(1))));
        }
    }

    #[test]
    fn non_finite_features_rejected() {
        assert!(matches!(
            Dataset::new(vec![0.0, f64::NAN], 1, vec![0, 1], 2),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
    }

    #[test]
    fn nb_separated_gaussians() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let noise = Normal::new(0.0, 1.0).unwrap();
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..200 {
            let c = i % 2;
            x.push(10.0 * c as f64 + noise.sample(&mut rng));
            y.push(c);
        }
        let data = Dataset::new(x, 1, y, 2).unwrap();
        let m = ClassifierSpec::NaiveBayes(NbParams::default()).train(&data, 0).unwrap();
        assert!(accuracy(&m, &data) >= 0.99);
    }

    #[test]
    fn nb_single_point_per_class() {
        let data = Dataset::new(vec![0.0, 0.0, 4.0, 4.0], 2, vec![0, 1], 2).unwrap();
        let m = train_gaussian_nb(&data, &NbParams::default()).unwrap();
        assert_eq!(m.predict_row(&[0.1, 0.0]), 0);
        assert_eq!(m.predict_row(&[3.9, 4.2]), 1);
        assert!(m.log_posteriors(&[1e6, -1e6]).iter().all(|v| v.is_finite()));
    }

    #[test]
    fn nb_prior_dominates_identical_likelihoods() {
        let mut y = vec![0; 90];
        y.extend(vec![1; 10]);
        let x: Vec<f64> = (0..100).map(|i| (i % 10) as f64).collect();
        // class 1 rows copy class 0's value pattern exactly
        let data = Dataset::new(x, 1, y, 2).unwrap();
        let m = train_gaussian_nb(&data, &NbParams::default()).unwrap();
        assert_eq!(m.predict_row(&[4.5]), 0);
    }

    #[test]
    fn nb_boundary_tie_goes_low() {
        let data = Dataset::new(vec![-1.0, -3.0, 1.0, 3.0], 1, vec![0, 0, 1, 1], 2).unwrap();
        let m = train_gaussian_nb(&data, &NbParams::default()).unwrap();
        let lp = m.log_posteriors(&[0.0]);
        assert_eq!(lp[0], lp[1]);
        assert_eq!(m.predict_row(&[0.0]), 0);
    }

    #[test]
    fn forest_estimator_counts() {
        let data = blobs(&[(-1.0, 0.0), (1.0, 0.0)], 20, 0.3, 1);
        for n in [10, 25, 50, 100] {
            let p = ForestParams {
                n_estimators: n,
                ..Default::default()
            };
            assert_eq!(train_random_forest(&data, &p, 0).unwrap().trees().len(), n);
        }
    }

    #[test]
    fn forest_single_threshold() {
        let x: Vec<f64> = (-10..10).map(|i| i as f64 + 0.5).collect();
        let y: Vec<usize> = x.iter().map(|&v| usize::from(v >= 0.0)).collect();
        let data = Dataset::new(x, 1, y, 2).unwrap();
        let p = ForestParams {
            n_estimators: 10,
            ..Default::default()
        };
        let m = ClassifierSpec::RandomForest(p).train(&data, 4).unwrap();
        assert_eq!(accuracy(&m, &data), 1.0);
    }

    #[test]
    fn forest_xor() {
        for seed in 0..5 {
            let data = blobs(&[(-2.0, -2.0), (2.0, 2.0), (-2.0, 2.0), (2.0, -2.0)], 25, 0.5, seed);
            let y: Vec<usize> = data.targets().iter().map(|&c| c / 2).collect();
            let xor = Dataset::new(data.features().to_vec(), 2, y, 2).unwrap();
            let p = ForestParams {
                n_estimators: 50,
                max_depth: Some(4),
                ..Default::default()
            };
            let m = ClassifierSpec::RandomForest(p).train(&xor, seed).unwrap();
            assert!(accuracy(&m, &xor) > 0.9, "seed {seed}");
        }
    }

    #[test]
    fn forest_of_one_full_tree_is_the_tree() {
        let data = blobs(&[(-1.0, 0.0), (1.0, 0.5), (0.0, 1.0)], 30, 0.8, 2);
        let p = ForestParams {
            n_estimators: 1,
            max_depth: None,
            bootstrap: false,
            max_features: MaxFeatures::All,
        };
        let forest = train_random_forest(&data, &p, 11).unwrap();
        let rows: Vec<usize> = (0..data.len()).collect();
        let tree_params = TreeParams {
            max_depth: None,
            max_features: MaxFeatures::All,
        };
        let tree = DecisionTree::fit(&data, &rows, &tree_params, 0).unwrap();
        for i in 0..data.len() {
            assert_eq!(forest.predict_row(data.row(i)), tree.predict_row(data.row(i)));
        }
        let probe = [0.3, -0.7];
        assert_eq!(forest.predict_row(&probe), tree.predict_row(&probe));
    }

    #[test]
    fn predict_shapes() {
        let data = blobs(&[(-3.0, 0.0), (3.0, 0.0)], 10, 0.5, 0);
        let m = ClassifierSpec::Svm(SvmParams::default()).train(&data, 0).unwrap();
        assert!(m.predict(&[]).unwrap().is_empty());
        assert!(matches!(m.predict(&[1.0, 2.0, 3.0]), Err(Error::DimensionMismatch { .. })));
        assert!(m.predict_rows(&[vec![1.0]]).is_err());
    }

    #[test]
    fn svm_scaling_keeps_argmax() {
        let data = blobs(&[(-2.0, 0.0), (2.0, 0.0), (0.0, 2.0)], 30, 1.0, 5);
        let m = train_linear_svm(&data, &SvmParams::default(), 1).unwrap();
        let big = m.scaled(13.0);
        for i in 0..data.len() {
            assert_eq!(m.predict_row(data.row(i)), big.predict_row(data.row(i)));
        }
    }

    #[test]
    fn determinism_and_nb_order_invariance() {
        let data = blobs(&[(-1.0, 0.0), (1.0, 0.0), (0.0, 1.5)], 30, 0.9, 8);
        let svm = ClassifierSpec::Svm(SvmParams::default());
        assert_eq!(svm.train(&data, 5).unwrap(), svm.train(&data, 5).unwrap());
        let rf = ClassifierSpec::RandomForest(ForestParams {
            n_estimators: 10,
            ..Default::default()
        });
        assert_eq!(rf.train(&data, 5).unwrap(), rf.train(&data, 5).unwrap());

        let mut order: Vec<usize> = (0..data.len()).collect();
        shuffle(&mut order, &mut ChaCha8Rng::seed_from_u64(2));
        let shuffled = data.subset(&order);
        let a = train_gaussian_nb(&data, &NbParams::default()).unwrap();
        let b = train_gaussian_nb(&shuffled, &NbParams::default()).unwrap();
        let probes = blobs(&[(0.0, 0.0)], 50, 2.0, 77);
        for i in 0..probes.len() {
            assert_eq!(a.predict_row(probes.row(i)), b.predict_row(probes.row(i)));
        }
    }
}
