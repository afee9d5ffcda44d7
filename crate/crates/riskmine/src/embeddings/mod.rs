//! Skipgram word vectors with character n-gram subwords, trained by negative
//! sampling on the extraction corpus.
//!
//! A word's representation is its word vector plus the vectors of its hashed
//! subword buckets, so out-of-vocabulary words (misspellings, variants) still
//! compose a usable vector from their character n-grams. Similarity is the
//! normalized dot product; taxonomy expansion takes the top-k most similar
//! vocabulary words for each in-vocabulary seed term.

mod subword;
mod trainer;
mod vectors;
mod vocab;

pub use subword::{bucket_of, subword_ngrams};
pub use trainer::{gradient_check, train_skipgram, TrainMode, TrainReport};
pub use vectors::{expand_taxonomy, WordVectors};
pub use vocab::{build_vocab, Vocab};

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::taxonomy::{ExpansionCandidates, Taxonomy};

/// Training hyperparameters. Defaults mirror common skipgram conventions;
/// the values used for a run are recorded in the model metadata sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub min_count: u64,
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub bucket_count: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub rng_seed: u64,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            dim: 100,
            window: 5,
            negatives: 5,
            min_count: 5,
            ngram_min: 3,
            ngram_max: 6,
            bucket_count: 2_000_000,
            epochs: 5,
            learning_rate: 0.05,
            rng_seed: 1,
        }
    }
}

impl EmbeddingConfig {
    pub fn validate(&self) -> Result<(), EmbeddingError> {
        if self.dim == 0 {
            return Err(EmbeddingError::InvalidConfig("dim must be >= 1".into()));
        }
        if self.ngram_min > self.ngram_max {
            return Err(EmbeddingError::InvalidConfig(
                "ngram_min must be <= ngram_max".into(),
            ));
        }
        if self.ngram_min == 0 || self.bucket_count == 0 || self.window == 0 {
            return Err(EmbeddingError::InvalidConfig(
                "window, ngram_min and bucket_count must be positive".into(),
            ));
        }
        if self.learning_rate <= 0.0 || !self.learning_rate.is_finite() {
            return Err(EmbeddingError::InvalidConfig(
                "learning_rate must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("no vocabulary word passes the min_count threshold")]
    EmptyVocabulary,
    #[error("training loss became non-finite in epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("word {0:?} has no representation (out of vocabulary, no extractable n-grams)")]
    NoRepresentation(String),
    #[error("word {0:?} has a zero vector; cosine similarity is undefined")]
    ZeroVector(String),
    #[error("term {0:?} is not in the model vocabulary")]
    OutOfVocabularyTerm(String),
    #[error("invalid embedding config: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

/// Dense row-major matrix over atomic u64 bit patterns.
///
/// Relaxed loads/stores compile to plain moves, so the deterministic
/// single-threaded path pays nothing; the parallel path updates rows
/// lock-free in hogwild fashion (concurrent read-modify-write may lose
/// increments, which that mode tolerates by design).
pub(crate) struct AtomicMatrix {
    rows: usize,
    dim: usize,
    data: Vec<AtomicU64>,
}

impl AtomicMatrix {
    pub(crate) fn zeros(rows: usize, dim: usize) -> Self {
        let mut data = Vec::with_capacity(rows * dim);
        data.resize_with(rows * dim, || AtomicU64::new(0f64.to_bits()));
        AtomicMatrix { rows, dim, data }
    }

    pub(crate) fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub(crate) fn get(&self, row: usize, j: usize) -> f64 {
        f64::from_bits(self.data[row * self.dim + j].load(Ordering::Relaxed))
    }

    #[inline]
    pub(crate) fn set(&self, row: usize, j: usize, value: f64) {
        self.data[row * self.dim + j].store(value.to_bits(), Ordering::Relaxed);
    }

    pub(crate) fn add_into(&self, row: usize, out: &mut [f64]) {
        for (j, slot) in out.iter_mut().enumerate() {
            *slot += self.get(row, j);
        }
    }

    /// row += alpha * x
    pub(crate) fn add_scaled(&self, row: usize, alpha: f64, x: &[f64]) {
        for (j, &xj) in x.iter().enumerate() {
            self.set(row, j, self.get(row, j) + alpha * xj);
        }
    }

    pub(crate) fn dot(&self, row: usize, x: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (j, &xj) in x.iter().enumerate() {
            sum += self.get(row, j) * xj;
        }
        sum
    }
}

impl std::fmt::Debug for AtomicMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AtomicMatrix({}x{})", self.rows, self.dim)
    }
}

/// A trained (or freshly initialized) embedding model.
///
/// Input rows `0..vocab_size` are word vectors; rows `vocab_size..` are
/// subword buckets. `r(w) = input[w] + Σ input[bucket(g)]` over w's n-grams.
#[derive(Debug)]
pub struct EmbeddingModel {
    pub config: EmbeddingConfig,
    pub vocab: Vocab,
    pub(crate) input: AtomicMatrix,
    pub(crate) output: AtomicMatrix,
    /// Per vocab word: absolute input-matrix rows of its subword buckets.
    pub(crate) subword_rows: Vec<Vec<usize>>,
    snapshot: OnceLock<WordVectors>,
}

impl EmbeddingModel {
    /// Build vocabulary and randomly initialize parameters (word and bucket
    /// input rows uniform in ±1/dim from the seeded generator, output rows
    /// zero). Training with zero epochs returns exactly this state.
    pub fn initialize(
        sentences: &[Vec<String>],
        config: &EmbeddingConfig,
    ) -> Result<Self, EmbeddingError> {
        config.validate()?;
        let vocab = build_vocab(sentences, config.min_count)?;
        Ok(EmbeddingModel::from_vocab(vocab, config.clone()))
    }

    pub(crate) fn from_vocab(vocab: Vocab, config: EmbeddingConfig) -> Self {
        use rand::{Rng, SeedableRng};
        let vocab_size = vocab.len();
        let input = AtomicMatrix::zeros(vocab_size + config.bucket_count, config.dim);
        let output = AtomicMatrix::zeros(vocab_size, config.dim);
        let subword_rows: Vec<Vec<usize>> = vocab
            .words()
            .iter()
            .map(|word| {
                subword_ngrams(word, config.ngram_min, config.ngram_max)
                    .iter()
                    .map(|g| vocab_size + bucket_of(g, config.bucket_count))
                    .collect()
            })
            .collect();
        // Word rows and the bucket rows the vocabulary actually references
        // get random values; untouched buckets stay zero, so they contribute
        // nothing when an out-of-vocabulary n-gram hashes into them.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.rng_seed);
        let scale = 1.0 / config.dim as f64;
        let mut fill = |row: usize| {
            for j in 0..config.dim {
                input.set(row, j, rng.gen_range(-scale..scale));
            }
        };
        for row in 0..vocab_size {
            fill(row);
        }
        let mut initialized = std::collections::HashSet::new();
        for rows in &subword_rows {
            for &row in rows {
                if initialized.insert(row) {
                    fill(row);
                }
            }
        }
        EmbeddingModel {
            config,
            vocab,
            input,
            output,
            subword_rows,
            snapshot: OnceLock::new(),
        }
    }

    /// Composed input representation of an in-vocabulary word.
    pub(crate) fn representation(&self, word_idx: usize) -> Vec<f64> {
        let mut repr = vec![0.0; self.config.dim];
        self.input.add_into(word_idx, &mut repr);
        for &row in &self.subword_rows[word_idx] {
            self.input.add_into(row, &mut repr);
        }
        repr
    }

    /// Vector for any word: in-vocabulary words compose word + subword rows;
    /// out-of-vocabulary words fall back to the sum of their subword buckets.
    pub fn word_vector(&self, word: &str) -> Result<Vec<f64>, EmbeddingError> {
        if let Some(idx) = self.vocab.index_of(word) {
            return Ok(self.representation(idx));
        }
        let grams = subword_ngrams(word, self.config.ngram_min, self.config.ngram_max);
        if grams.is_empty() {
            return Err(EmbeddingError::NoRepresentation(word.to_string()));
        }
        let mut repr = vec![0.0; self.config.dim];
        for gram in &grams {
            let row = self.vocab.len() + bucket_of(gram, self.config.bucket_count);
            self.input.add_into(row, &mut repr);
        }
        Ok(repr)
    }

    /// Cosine similarity of the two words' representations.
    pub fn similarity(&self, a: &str, b: &str) -> Result<f64, EmbeddingError> {
        let va = self.word_vector(a)?;
        let vb = self.word_vector(b)?;
        let na = norm(&va);
        let nb = norm(&vb);
        if na == 0.0 {
            return Err(EmbeddingError::ZeroVector(a.to_string()));
        }
        if nb == 0.0 {
            return Err(EmbeddingError::ZeroVector(b.to_string()));
        }
        Ok(dot(&va, &vb) / (na * nb))
    }

    /// Composed vocabulary vectors as a standalone query set (this is also
    /// what the text export writes).
    pub fn to_word_vectors(&self) -> WordVectors {
        WordVectors::from_rows(
            self.config.dim,
            self.vocab
                .words()
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), self.representation(i))),
        )
    }

    fn snapshot(&self) -> &WordVectors {
        self.snapshot.get_or_init(|| self.to_word_vectors())
    }

    /// The k vocabulary words most similar to `term` (itself excluded),
    /// descending score, ties broken by vocabulary order. `term` must be in
    /// the vocabulary.
    pub fn top_k_similar(
        &self,
        term: &str,
        k: usize,
    ) -> Result<Vec<(String, f64)>, EmbeddingError> {
        self.snapshot().top_k_similar(term, k)
    }

    /// Top-k expansion proposals for every active in-vocabulary taxonomy
    /// term; out-of-vocabulary terms land in the skip report.
    pub fn expand_taxonomy(&self, taxonomy: &Taxonomy, k: usize) -> ExpansionCandidates {
        expand_taxonomy(self.snapshot(), taxonomy, k)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Replace greedy leftmost-longest runs matching any multi-token phrase with
/// a single underscore-joined token. Single-token phrases are ignored. Used
/// to make multi-word taxonomy terms trainable as single vocabulary entries.
pub fn join_phrases(tokens: &[String], phrases: &[Vec<String>]) -> Vec<String> {
    use std::collections::HashMap;
    let mut by_first: HashMap<&str, Vec<&Vec<String>>> = HashMap::new();
    for phrase in phrases {
        if phrase.len() >= 2 {
            by_first.entry(phrase[0].as_str()).or_default().push(phrase);
        }
    }
    for candidates in by_first.values_mut() {
        candidates.sort_by_key(|p| std::cmp::Reverse(p.len()));
    }
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let joined = by_first.get(tokens[i].as_str()).and_then(|candidates| {
            candidates.iter().find(|p| {
                i + p.len() <= tokens.len() && p.iter().zip(&tokens[i..]).all(|(a, b)| a == b)
            })
        });
        match joined {
            Some(phrase) => {
                out.push(phrase.join("_"));
                i += phrase.len();
            }
            None => {
                out.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    out
}
