//! Skip-gram with negative sampling over walk corpora, word2vec text
//! persistence, and reconstruction-error based node2vec tuning.

use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelMap, NodeId};
use crate::sampling::{self, generate_corpus, Corpus, Strategy, WalkConfig};

/// One dense vector per node, in graph index order.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    ids: Vec<String>,
    dimension: usize,
    data: Vec<f64>,
}

impl Embedding {
    pub fn new(ids: Vec<String>, dimension: usize, data: Vec<f64>) -> Result<Embedding> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("embedding dimension must be positive".into()));
        }
        if data.len() != ids.len() * dimension {
            return Err(Error::DimensionMismatch {
                expected: ids.len() * dimension,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dimension,
                col: pos % dimension,
            });
        }
        Ok(Embedding { ids, dimension, data })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn vector(&self, node: NodeId) -> &[f64] {
        &self.data[node * self.dimension..(node + 1) * self.dimension]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Rows for `nodes`, flattened.
    pub fn rows(&self, nodes: &[NodeId]) -> Vec<f64> {
        nodes.iter().flat_map(|&n| self.vector(n).iter().copied()).collect()
    }

    pub fn scaled(&self, factor: f64) -> Embedding {
        Embedding {
            ids: self.ids.clone(),
            dimension: self.dimension,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// word2vec text format: `<count> <dim>` header, then `<id> v1 .. vdim`.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "{} {}", self.ids.len(), self.dimension)?;
        for (node, id) in self.ids.iter().enumerate() {
            write!(sink, "{id}")?;
            for x in self.vector(node) {
                write!(sink, " {x:.8e}")?;
            }
            writeln!(sink)?;
        }
        Ok(())
    }

    /// Reads word2vec text; rows are placed at the graph's indices and every
    /// graph node must appear exactly once.
    pub fn load<R: BufRead>(source: R, graph: &Graph) -> Result<Embedding> {
        let mut lines = source.lines().enumerate();
        let (count, dimension) = loop {
            let Some((lineno, line)) = lines.next() else {
                return Err(Error::EmptyInput("embedding file has no header"));
            };
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                [c, d] => c.parse::<usize>().ok().zip(d.parse::<usize>().ok()),
                _ => None,
            };
            break parsed.ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: format!("expected `<count> <dimension>` header, got `{line}`"),
            })?;
        };
        if dimension == 0 {
            return Err(Error::Parse {
                line: 1,
                message: "dimension must be positive".into(),
            });
        }
        let mut data = vec![0.0; graph.node_count() * dimension];
        let mut seen = vec![false; graph.node_count()];
        let mut rows = 0;
        for (lineno, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let id = fields.next().unwrap_or_default();
            let node = graph
                .index_of(id)
                .ok_or_else(|| Error::UnknownNode(id.to_string()))?;
            if seen[node] {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("duplicate vector for node `{id}`"),
                });
            }
            seen[node] = true;
            let values = fields
                .map(|f| {
                    f.parse::<f64>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        message: format!("non-numeric component `{f}`"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != dimension {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected {dimension} components, got {}", values.len()),
                });
            }
            data[node * dimension..(node + 1) * dimension].copy_from_slice(&values);
            rows += 1;
        }
        if rows != count {
            return Err(Error::Mismatch(format!("header announces {count} vectors, body has {rows}")));
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Mismatch(format!(
                "no vector for node `{}`",
                graph.external_id(missing)
            )));
        }
        Embedding::new(graph.ids().to_vec(), dimension, data)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SgnsParams {
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub initial_lr: f64,
    pub final_lr: f64,
    pub noise_exponent: f64,
    pub seed: u64,
    /// 0 trains deterministically on the calling thread; otherwise that many
    /// workers update shared vectors without synchronization.
    pub threads: usize,
}

impl Default for SgnsParams {
    fn default() -> Self {
        SgnsParams {
            window: 10,
            negatives: 5,
            epochs: 5,
            initial_lr: 0.025,
            final_lr: 0.0001,
            noise_exponent: 0.75,
            seed: 0,
            threads: 0,
        }
    }
}

impl SgnsParams {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.negatives == 0 || self.epochs == 0 {
            return Err(Error::InvalidParameter(
                "window, negatives and epochs must be positive".into(),
            ));
        }
        if !(self.initial_lr > 0.0 && self.final_lr >= 0.0 && self.final_lr <= self.initial_lr) {
            return Err(Error::InvalidParameter(format!(
                "learning rates must satisfy 0 <= final ({}) <= initial ({}), initial > 0",
                self.final_lr, self.initial_lr
            )));
        }
        Ok(())
    }
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `ln(1 + e^x)` without overflow.
#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub loss: f64,
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// Loss `-ln σ(u·v) - Σ ln σ(-u·n_k)` for center `u`, context `v` and
/// negatives `n_k`, with its gradient for every input vector.
pub fn sgns_pair_objective(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> Result<PairGradient> {
    let dim = center.len();
    for v in std::iter::once(context).chain(negatives.iter().copied()) {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let s = dot(center, context);
    let mut loss = softplus(-s);
    let g_pos = sigmoid(s) - 1.0;
    let mut grad_center: Vec<f64> = context.iter().map(|v| g_pos * v).collect();
    let grad_context = center.iter().map(|u| g_pos * u).collect();
    let mut grad_negatives = Vec::with_capacity(negatives.len());
    for n in negatives {
        let s = dot(center, n);
        loss += softplus(s);
        let g = sigmoid(s);
        for (gc, x) in grad_center.iter_mut().zip(n.iter()) {
            *gc += g * x;
        }
        grad_negatives.push(center.iter().map(|u| g * u).collect());
    }
    Ok(PairGradient {
        loss,
        center: grad_center,
        context: grad_context,
        negatives: grad_negatives,
    })
}

/// Eight independent accumulators so the reduction vectorizes.
#[inline]
fn dot(a: &[f32], b: &[f32]) -> f32 {
    let mut acc = [0.0f32; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f32 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    acc.iter().sum::<f32>() + tail
}

/// One SGD step on the pair objective for input row `center` against output
/// rows `targets` (first the context, then negatives). Returns the loss
/// before the step.
#[inline]
fn sgd_pair(
    input: &mut [f32],
    output: &mut [f32],
    dim: usize,
    center: usize,
    targets: &[usize],
    lr: f32,
    grad: &mut [f32],
) -> f64 {
    grad.iter_mut().for_each(|g| *g = 0.0);
    let u = &input[center * dim..(center + 1) * dim];
    let mut loss = 0.0;
    for (k, &t) in targets.iter().enumerate() {
        let w = &mut output[t * dim..(t + 1) * dim];
        let s = dot(u, w).clamp(-30.0, 30.0);
        // one exponential serves both σ(s) and ln(1 + e^-|s|)
        let e = (-s.abs()).exp();
        let sig = if s >= 0.0 { 1.0 / (1.0 + e) } else { e / (1.0 + e) };
        let tail = e.ln_1p();
        let g = if k == 0 {
            loss += (tail + (-s).max(0.0)) as f64;
            (1.0 - sig) * lr
        } else {
            loss += (tail + s.max(0.0)) as f64;
            -sig * lr
        };
        for ((gu, wi), ui) in grad.iter_mut().zip(w.iter_mut()).zip(u.iter()) {
            *gu += g * *wi;
            *wi += g * ui;
        }
    }
    let u = &mut input[center * dim..(center + 1) * dim];
    for (ui, gu) in u.iter_mut().zip(grad.iter()) {
        *ui += gu;
    }
    loss
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainingReport {
    /// Mean loss of the pairs seen during each epoch, measured before each
    /// update.
    pub epoch_loss: Vec<f64>,
    /// Mean pair loss over the whole corpus under the parameters reached at
    /// the end of each epoch, with the same negatives every epoch.
    pub objective: Vec<f64>,
    pub pairs_per_epoch: usize,
}

/// Frozen-parameter mean pair loss over the corpus.
fn corpus_objective(
    input: &[f32],
    output: &[f32],
    dim: usize,
    corpus: &Corpus,
    params: &SgnsParams,
    noise: &WeightedAliasIndex<f64>,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling::mix64(params.seed ^ 0x0b1e_c71e));
    let score = |a: usize, b: usize| -> f64 {
        let u = &input[a * dim..(a + 1) * dim];
        let w = &output[b * dim..(b + 1) * dim];
        dot(u, w).clamp(-30.0, 30.0) as f64
    };
    let (mut loss, mut pairs) = (0.0, 0usize);
    for walk in &corpus.walks {
        for (i, &center) in walk.iter().enumerate() {
            let lo = i.saturating_sub(params.window);
            let hi = (i + params.window + 1).min(walk.len());
            for j in (lo..hi).filter(|&j| j != i) {
                loss += softplus(-score(center, walk[j]));
                for _ in 0..params.negatives {
                    let neg = noise.sample(&mut rng);
                    if neg != walk[j] {
                        loss += softplus(score(center, neg));
                    }
                }
                pairs += 1;
            }
        }
    }
    loss / pairs.max(1) as f64
}

fn noise_table(corpus: &Corpus, node_count: usize, exponent: f64) -> Result<WeightedAliasIndex<f64>> {
    let mut counts = vec![0usize; node_count];
    for walk in &corpus.walks {
        for &n in walk {
            counts[n] += 1;
        }
    }
    let weights: Vec<f64> = counts
        .iter()
        .map(|&c| if c == 0 { 0.0 } else { (c as f64).powf(exponent) })
        .collect();
    WeightedAliasIndex::new(weights)
        .map_err(|e| Error::InvalidParameter(format!("noise distribution: {e}")))
}

fn window_pairs(corpus: &Corpus, window: usize) -> usize {
    corpus
        .walks
        .iter()
        .map(|w| {
            let n = w.len();
            (0..n)
                .map(|i| i.saturating_sub(window)..(i + window + 1).min(n))
                .map(|r| r.len() - 1)
                .sum::<usize>()
        })
        .sum()
}

struct SharedRows(*mut f32, usize);
unsafe impl Send for SharedRows {}
unsafe impl Sync for SharedRows {}

impl SharedRows {
    /// Hogwild view: workers write through aliasing slices on purpose.
    #[allow(clippy::mut_from_ref)]
    unsafe fn slice(&self) -> &mut [f32] {
        std::slice::from_raw_parts_mut(self.0, self.1)
    }
}

/// Trains node vectors on `corpus`. Returns the input (center) vectors.
pub fn train_sgns(graph: &Graph, corpus: &Corpus, dimension: usize, params: &SgnsParams) -> Result<Embedding> {
    Ok(train(graph, corpus, dimension, params, false)?.0)
}

/// Like [`train_sgns`], also evaluating the full corpus objective after
/// every epoch (one extra forward pass per epoch).
pub fn train_sgns_with_report(
    graph: &Graph,
    corpus: &Corpus,
    dimension: usize,
    params: &SgnsParams,
) -> Result<(Embedding, TrainingReport)> {
    train(graph, corpus, dimension, params, true)
}

fn train(
    graph: &Graph,
    corpus: &Corpus,
    dimension: usize,
    params: &SgnsParams,
    evaluate: bool,
) -> Result<(Embedding, TrainingReport)> {
    params.validate()?;
    if dimension == 0 {
        return Err(Error::InvalidParameter("embedding dimension must be positive".into()));
    }
    if corpus.token_count() == 0 {
        return Err(Error::EmptyInput("corpus has no walks"));
    }
    let n = graph.node_count();
    if let Some(&bad) = corpus.walks.iter().flatten().find(|&&t| t >= n) {
        return Err(Error::UnknownNode(format!("corpus token {bad}")));
    }
    let noise = noise_table(corpus, n, params.noise_exponent)?;

    let mut init_rng = ChaCha8Rng::seed_from_u64(sampling::mix64(params.seed));
    let scale = 0.5 / dimension as f32;
    let mut input: Vec<f32> = (0..n * dimension)
        .map(|_| (init_rng.random::<f32>() - 0.5) * 2.0 * scale)
        .collect();
    let mut output = vec![0.0f32; n * dimension];

    let pairs_per_epoch = window_pairs(corpus, params.window);
    let total_tokens = corpus.token_count() * params.epochs;
    let mut epoch_loss = Vec::with_capacity(params.epochs);
    let mut objective = Vec::new();

    let lr_at = |done: usize| -> f32 {
        let progress = done as f64 / total_tokens as f64;
        (params.initial_lr - (params.initial_lr - params.final_lr) * progress).max(params.final_lr) as f32
    };

    if params.threads == 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut grad = vec![0.0f32; dimension];
        let mut targets = Vec::with_capacity(params.negatives + 1);
        let mut done = 0usize;
        for epoch in 0..params.epochs {
            let mut loss = 0.0;
            for walk in &corpus.walks {
                loss += train_walk(
                    walk,
                    &mut input,
                    &mut output,
                    dimension,
                    params,
                    &noise,
                    &mut rng,
                    &mut targets,
                    &mut grad,
                    &mut |_| {
                        done += 1;
                        lr_at(done)
                    },
                );
            }
            let mean = loss / pairs_per_epoch.max(1) as f64;
            log::info!("epoch={} mean_loss={:.6} lr={:.6}", epoch + 1, mean, lr_at(done));
            epoch_loss.push(mean);
            if evaluate {
                objective.push(corpus_objective(&input, &output, dimension, corpus, params, &noise));
            }
        }
    } else {
        let workers = params.threads;
        let done = AtomicUsize::new(0);
        let input_rows = SharedRows(input.as_mut_ptr(), input.len());
        let output_rows = SharedRows(output.as_mut_ptr(), output.len());
        for epoch in 0..params.epochs {
            let chunk = corpus.walks.len().div_ceil(workers);
            let loss: f64 = std::thread::scope(|scope| {
                let handles: Vec<_> = corpus
                    .walks
                    .chunks(chunk.max(1))
                    .enumerate()
                    .map(|(w, walks)| {
                        let (input_rows, output_rows, noise, done) = (&input_rows, &output_rows, &noise, &done);
                        scope.spawn(move || {
                            let mut rng = ChaCha8Rng::seed_from_u64(sampling::walk_seed(params.seed, w, epoch));
                            let mut grad = vec![0.0f32; dimension];
                            let mut targets = Vec::with_capacity(params.negatives + 1);
                            // SAFETY: rows are plain f32 and racing updates are tolerated
                            let (inp, out) = unsafe { (input_rows.slice(), output_rows.slice()) };
                            let mut loss = 0.0;
                            for walk in walks {
                                loss += train_walk(
                                    walk, inp, out, dimension, params, noise, &mut rng, &mut targets, &mut grad,
                                    &mut |_| lr_at(done.fetch_add(1, Ordering::Relaxed) + 1),
                                );
                            }
                            loss
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("training worker panicked")).sum()
            });
            let mean = loss / pairs_per_epoch.max(1) as f64;
            log::info!(
                "epoch={} mean_loss={:.6} lr={:.6}",
                epoch + 1,
                mean,
                lr_at(done.load(Ordering::Relaxed))
            );
            epoch_loss.push(mean);
            if evaluate {
                // SAFETY: every worker has joined
                let (inp, out) = unsafe { (input_rows.slice(), output_rows.slice()) };
                objective.push(corpus_objective(inp, out, dimension, corpus, params, &noise));
            }
        }
    }

    let data = input.iter().map(|&x| x as f64).collect();
    let embedding = Embedding::new(graph.ids().to_vec(), dimension, data)?;
    Ok((
        embedding,
        TrainingReport {
            epoch_loss,
            objective,
            pairs_per_epoch,
        },
    ))
}

#[allow(clippy::too_many_arguments)]
fn train_walk(
    walk: &[NodeId],
    input: &mut [f32],
    output: &mut [f32],
    dim: usize,
    params: &SgnsParams,
    noise: &WeightedAliasIndex<f64>,
    rng: &mut ChaCha8Rng,
    targets: &mut Vec<usize>,
    grad: &mut [f32],
    next_lr: &mut dyn FnMut(usize) -> f32,
) -> f64 {
    let mut loss = 0.0;
    let len = walk.len();
    for (i, &center) in walk.iter().enumerate() {
        let lr = next_lr(i);
        let lo = i.saturating_sub(params.window);
        let hi = (i + params.window + 1).min(len);
        for j in lo..hi {
            if j == i {
                continue;
            }
            let context = walk[j];
            targets.clear();
            targets.push(context);
            for _ in 0..params.negatives {
                let neg = noise.sample(rng);
                if neg != context {
                    targets.push(neg);
                }
            }
            loss += sgd_pair(input, output, dim, center, targets, lr, grad);
        }
    }
    loss
}

/// Mean over nodes with at least one non-self neighbor of the fraction of
/// the node's `d` most cosine-similar other nodes that are not graph
/// neighbors, `d` being its non-self degree. A zero vector has similarity
/// `-inf` to everything; ties go to the lower index.
pub fn reconstruction_error(graph: &Graph, embedding: &Embedding) -> Result<f64> {
    let n = graph.node_count();
    if embedding.node_count() != n {
        return Err(Error::Mismatch(format!(
            "embedding covers {} nodes, graph has {n}",
            embedding.node_count()
        )));
    }
    let dim = embedding.dimension();
    let mut unit = vec![0.0; n * dim];
    let mut zero = vec![false; n];
    for v in 0..n {
        let row = embedding.vector(v);
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            zero[v] = true;
        } else {
            for (dst, x) in unit[v * dim..(v + 1) * dim].iter_mut().zip(row) {
                *dst = x / norm;
            }
        }
    }
    let mut total = 0.0;
    let mut counted = 0usize;
    let mut sims: Vec<(f64, usize)> = Vec::with_capacity(n);
    for u in 0..n {
        let d = graph.neighbors(u).iter().filter(|&&x| x != u).count();
        if d == 0 {
            continue;
        }
        sims.clear();
        let ru = &unit[u * dim..(u + 1) * dim];
        for v in (0..n).filter(|&v| v != u) {
            let s = if zero[u] || zero[v] {
                f64::NEG_INFINITY
            } else {
                ru.iter().zip(&unit[v * dim..(v + 1) * dim]).map(|(a, b)| a * b).sum()
            };
            sims.push((s, v));
        }
        let order = |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
        if d < sims.len() {
            sims.select_nth_unstable_by(d - 1, order);
        }
        let misses = sims[..d].iter().filter(|&&(_, v)| !graph.has_edge(u, v)).count();
        total += misses as f64 / d as f64;
        counted += 1;
    }
    Ok(if counted == 0 { 0.0 } else { total / counted as f64 })
}

/// The (return, in-out) grid searched for node2vec.
pub const NODE2VEC_GRID_VALUES: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

pub fn full_node2vec_grid() -> Vec<(f64, f64)> {
    NODE2VEC_GRID_VALUES
        .iter()
        .flat_map(|&p| NODE2VEC_GRID_VALUES.iter().map(move |&q| (p, q)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneCell {
    pub return_param: f64,
    pub inout_param: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub best: TuneCell,
    pub cells: Vec<TuneCell>,
}

/// Trains one node2vec embedding per grid cell and keeps the one with the
/// lowest reconstruction error (ties: smaller return, then smaller in-out).
pub fn tune_node2vec(
    graph: &Graph,
    grid: &[(f64, f64)],
    walks: &WalkConfig,
    dimension: usize,
    sgns: &SgnsParams,
) -> Result<TuneResult> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("node2vec grid is empty".into()));
    }
    let labels = LabelMap::unlabeled(graph.node_count());
    let mut cells = Vec::with_capacity(grid.len());
    for &(return_param, inout_param) in grid {
        let config = WalkConfig {
            strategy: Strategy::Node2vec {
                return_param,
                inout_param,
            },
            ..*walks
        };
        let corpus = generate_corpus(graph, &labels, &config)?;
        let embedding = train_sgns(graph, &corpus, dimension, sgns)?;
        let error = reconstruction_error(graph, &embedding)?;
        log::info!("node2vec p={return_param} q={inout_param} reconstruction_error={error:.4}");
        cells.push(TuneCell {
            return_param,
            inout_param,
            error,
        });
    }
    let best = cells
        .iter()
        .min_by(|a, b| {
            a.error
                .total_cmp(&b.error)
                .then(a.return_param.total_cmp(&b.return_param))
                .then(a.inout_param.total_cmp(&b.inout_param))
        })
        .cloned()
        .expect("grid is non-empty");
    Ok(TuneResult { best, cells })
}
