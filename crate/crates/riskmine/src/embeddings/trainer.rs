//! Skipgram training with negative sampling.
//!
//! Each (center, context) pair inside the window performs one positive and
//! `negatives` negative updates on the binary logistic objective
//! `L = −log σ(r(c)·o(t)) − Σ log σ(−r(c)·o(n))`, where `r` is the
//! subword-summed input representation and `o` an output vector. The
//! learning rate decays linearly to zero over the total update count.
//!
//! Deterministic mode processes sentences on one thread with a seeded
//! generator and is bit-reproducible. Parallel mode shards sentences across
//! threads that update the shared matrices lock-free; interleaving makes the
//! result run-dependent, so reproducibility claims only cover deterministic
//! mode.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EmbeddingConfig, EmbeddingError, EmbeddingModel, Vocab};
use crate::util::sub_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainMode {
    /// Single-threaded, bit-reproducible for a fixed seed.
    Deterministic,
    /// Hogwild-style sharding; updates may interleave.
    Parallel { threads: usize },
}

/// Per-epoch mean loss and update accounting for a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub epoch_mean_loss: Vec<f64>,
    pub positive_pairs_per_epoch: u64,
    pub total_updates: u64,
}

/// Train a skipgram model over lemmatized sentences.
pub fn train_skipgram(
    sentences: &[Vec<String>],
    config: &EmbeddingConfig,
    mode: TrainMode,
) -> Result<(EmbeddingModel, TrainReport), EmbeddingError> {
    let model = EmbeddingModel::initialize(sentences, config)?;
    let id_sentences: Vec<Vec<usize>> = sentences
        .iter()
        .map(|s| {
            s.iter()
                .filter_map(|w| model.vocab.index_of(w))
                .collect::<Vec<_>>()
        })
        .filter(|ids| ids.len() >= 2)
        .collect();

    let pairs_per_epoch: u64 = id_sentences
        .iter()
        .map(|ids| {
            let len = ids.len();
            (0..len)
                .map(|pos| pos.min(config.window) + (len - 1 - pos).min(config.window))
                .sum::<usize>() as u64
        })
        .sum();
    let total_updates = pairs_per_epoch * config.epochs as u64;
    let mut report = TrainReport {
        epoch_mean_loss: Vec::new(),
        positive_pairs_per_epoch: pairs_per_epoch,
        total_updates,
    };
    if total_updates == 0 {
        return Ok((model, report));
    }

    let negative_table = NegativeTable::new(&model.vocab);
    let processed = AtomicU64::new(0);

    for epoch in 0..config.epochs {
        let epoch_loss = match mode {
            TrainMode::Deterministic => {
                let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(
                    config.rng_seed,
                    &format!("train:{epoch}:0"),
                ));
                train_chunk(
                    &model,
                    &id_sentences,
                    &negative_table,
                    &mut rng,
                    &processed,
                    total_updates,
                )
            }
            TrainMode::Parallel { threads } => {
                let threads = threads.max(1);
                let chunk_size = id_sentences.len().div_ceil(threads);
                std::thread::scope(|scope| {
                    let mut handles = Vec::new();
                    for (chunk_no, chunk) in id_sentences.chunks(chunk_size).enumerate() {
                        let model = &model;
                        let negative_table = &negative_table;
                        let processed = &processed;
                        let seed = sub_seed(config.rng_seed, &format!("train:{epoch}:{chunk_no}"));
                        handles.push(scope.spawn(move || {
                            let mut rng = ChaCha8Rng::seed_from_u64(seed);
                            train_chunk(
                                model,
                                chunk,
                                negative_table,
                                &mut rng,
                                processed,
                                total_updates,
                            )
                        }));
                    }
                    let mut total = 0.0;
                    for handle in handles {
                        total += handle.join().expect("training thread panicked")?;
                    }
                    Ok(total)
                })
            }
        }
        .map_err(|()| EmbeddingError::NonFiniteLoss { epoch })?;

        report
            .epoch_mean_loss
            .push(epoch_loss / pairs_per_epoch as f64);
    }

    Ok((model, report))
}

/// One pass over a sentence shard. Returns the summed sample loss, or `Err`
/// as soon as a sample loss stops being finite.
fn train_chunk(
    model: &EmbeddingModel,
    sentences: &[Vec<usize>],
    negative_table: &NegativeTable,
    rng: &mut ChaCha8Rng,
    processed: &AtomicU64,
    total_updates: u64,
) -> Result<f64, ()> {
    let config = &model.config;
    let lr0 = config.learning_rate;
    let mut repr = vec![0.0; config.dim];
    let mut grad_repr = vec![0.0; config.dim];
    let mut scores: Vec<(usize, f64, f64)> = Vec::new(); // (output row, label, dL/ds)
    let mut chunk_loss = 0.0;

    for ids in sentences {
        for (pos, &center) in ids.iter().enumerate() {
            let lo = pos.saturating_sub(config.window);
            let hi = (pos + config.window).min(ids.len() - 1);
            for (ctx, &target) in ids.iter().enumerate().take(hi + 1).skip(lo) {
                if ctx == pos {
                    continue;
                }
                let done = processed.fetch_add(1, Ordering::Relaxed);
                let lr = lr0 * (1.0 - done as f64 / total_updates as f64);

                scores.clear();
                scores.push((target, 1.0, 0.0));
                for _ in 0..config.negatives {
                    if let Some(neg) = negative_table.sample_excluding(rng, target) {
                        scores.push((neg, 0.0, 0.0));
                    }
                }

                model.representation_into(center, &mut repr);
                grad_repr.iter_mut().for_each(|g| *g = 0.0);
                let mut sample_loss = 0.0;
                for (row, label, grad_s) in scores.iter_mut() {
                    let s = model.output.dot(*row, &repr);
                    sample_loss -= log_sigmoid(if *label > 0.5 { s } else { -s });
                    let g = sigmoid(s) - *label;
                    *grad_s = g;
                    for (j, slot) in grad_repr.iter_mut().enumerate() {
                        *slot += g * model.output.get(*row, j);
                    }
                }
                if !sample_loss.is_finite() {
                    return Err(());
                }
                chunk_loss += sample_loss;

                // Reads above all see pre-update values; writes happen here.
                for &(row, _, grad_s) in scores.iter() {
                    model.output.add_scaled(row, -lr * grad_s, &repr);
                }
                model.input.add_scaled(center, -lr, &grad_repr);
                for &row in &model.subword_rows[center] {
                    model.input.add_scaled(row, -lr, &grad_repr);
                }
            }
        }
    }
    Ok(chunk_loss)
}

impl EmbeddingModel {
    pub(crate) fn representation_into(&self, word_idx: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        self.input.add_into(word_idx, out);
        for &row in &self.subword_rows[word_idx] {
            self.input.add_into(row, out);
        }
    }
}

/// Unigram^0.75 sampler over the vocabulary, drawn by binary search on the
/// cumulative distribution.
struct NegativeTable {
    cumulative: Vec<f64>,
}

impl NegativeTable {
    fn new(vocab: &Vocab) -> Self {
        let mut cumulative = Vec::with_capacity(vocab.len());
        let mut acc = 0.0;
        for i in 0..vocab.len() {
            acc += (vocab.count_of(i) as f64).powf(0.75);
            cumulative.push(acc);
        }
        if let Some(last) = cumulative.last().copied() {
            for v in &mut cumulative {
                *v /= last;
            }
        }
        NegativeTable { cumulative }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.gen_range(0.0..1.0);
        self.cumulative
            .partition_point(|&c| c < u)
            .min(self.cumulative.len() - 1)
    }

    /// Draw a negative different from `target`; gives up after a few redraws
    /// (relevant only for degenerate single-word vocabularies).
    fn sample_excluding(&self, rng: &mut ChaCha8Rng, target: usize) -> Option<usize> {
        for _ in 0..10 {
            let neg = self.sample(rng);
            if neg != target {
                return Some(neg);
            }
        }
        None
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Loss of one (center, outputs) sample at the model's current parameters.
/// This is the function the finite-difference oracle perturbs.
fn sample_loss(model: &EmbeddingModel, center: usize, outputs: &[(usize, f64)]) -> f64 {
    let mut repr = vec![0.0; model.config.dim];
    model.representation_into(center, &mut repr);
    let mut loss = 0.0;
    for &(row, label) in outputs {
        let s = model.output.dot(row, &repr);
        loss -= log_sigmoid(if label > 0.5 { s } else { -s });
    }
    loss
}

/// Compare analytic gradients against central finite differences of the
/// sample loss at `points` random parameter points; returns the maximum
/// relative error observed across every perturbed coordinate.
pub fn gradient_check(dim: usize, points: usize, step: f64, seed: u64) -> f64 {
    use std::collections::HashMap;

    let words = [
        "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel",
    ];
    let sentences: Vec<Vec<String>> = vec![words.iter().map(|w| w.to_string()).collect()];
    let config = EmbeddingConfig {
        dim,
        window: 2,
        negatives: 2,
        min_count: 1,
        ngram_min: 3,
        ngram_max: 4,
        bucket_count: 64,
        epochs: 1,
        learning_rate: 0.05,
        rng_seed: seed,
    };
    let model = EmbeddingModel::initialize(&sentences, &config).expect("fixed corpus");
    let vocab_size = model.vocab.len();
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, "gradient-check"));
    let mut max_rel_err: f64 = 0.0;

    for point in 0..points {
        // Random parameter point.
        for row in 0..model.input.rows() {
            for j in 0..dim {
                model.input.set(row, j, rng.gen_range(-0.5..0.5));
            }
        }
        for row in 0..vocab_size {
            for j in 0..dim {
                model.output.set(row, j, rng.gen_range(-0.5..0.5));
            }
        }

        let center = point % vocab_size;
        let outputs = vec![
            ((point + 1) % vocab_size, 1.0),
            ((point + 2) % vocab_size, 0.0),
            ((point + 3) % vocab_size, 0.0),
        ];

        // Analytic gradients at the point.
        let mut repr = vec![0.0; dim];
        model.representation_into(center, &mut repr);
        let mut grad_repr = vec![0.0; dim];
        let mut grad_out: HashMap<usize, Vec<f64>> = HashMap::new();
        for &(row, label) in &outputs {
            let s = model.output.dot(row, &repr);
            let g = sigmoid(s) - label;
            for (j, slot) in grad_repr.iter_mut().enumerate() {
                *slot += g * model.output.get(row, j);
            }
            let entry = grad_out.entry(row).or_insert_with(|| vec![0.0; dim]);
            for (e, r) in entry.iter_mut().zip(&repr) {
                *e += g * r;
            }
        }
        // Input rows receive grad_repr once per appearance in the
        // representation sum (bucket collisions raise the multiplicity).
        let mut input_rows: HashMap<usize, f64> = HashMap::new();
        *input_rows.entry(center).or_insert(0.0) += 1.0;
        for &row in &model.subword_rows[center] {
            *input_rows.entry(row).or_insert(0.0) += 1.0;
        }

        let mut check = |analytic: f64, fd: f64| {
            let denom = analytic.abs().max(fd.abs()).max(1e-8);
            max_rel_err = max_rel_err.max((analytic - fd).abs() / denom);
        };

        for (&row, &multiplicity) in &input_rows {
            for (j, &grad) in grad_repr.iter().enumerate() {
                let original = model.input.get(row, j);
                model.input.set(row, j, original + step);
                let plus = sample_loss(&model, center, &outputs);
                model.input.set(row, j, original - step);
                let minus = sample_loss(&model, center, &outputs);
                model.input.set(row, j, original);
                check(multiplicity * grad, (plus - minus) / (2.0 * step));
            }
        }
        for (&row, grads) in &grad_out {
            for (j, &grad) in grads.iter().enumerate() {
                let original = model.output.get(row, j);
                model.output.set(row, j, original + step);
                let plus = sample_loss(&model, center, &outputs);
                model.output.set(row, j, original - step);
                let minus = sample_loss(&model, center, &outputs);
                model.output.set(row, j, original);
                check(grad, (plus - minus) / (2.0 * step));
            }
        }
    }
    max_rel_err
}
