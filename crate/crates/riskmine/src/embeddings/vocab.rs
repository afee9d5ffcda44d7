//! Vocabulary construction for embedding training.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::EmbeddingError;

/// Frequency-thresholded vocabulary, ordered by descending frequency with
/// lexicographic tie-breaks. The order is the vocabulary order used for
/// similarity tie-breaking and file layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocab {
    words: Vec<String>,
    counts: Vec<u64>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    pub total_tokens: u64,
}

impl Vocab {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn count_of(&self, idx: usize) -> u64 {
        self.counts[idx]
    }

    pub fn word(&self, idx: usize) -> &str {
        &self.words[idx]
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }
}

/// Count tokens across sentences and keep words with frequency >=
/// `min_count`. Deterministic for a given corpus.
pub fn build_vocab(sentences: &[Vec<String>], min_count: u64) -> Result<Vocab, EmbeddingError> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    let mut total_tokens = 0u64;
    for sentence in sentences {
        for token in sentence {
            *counts.entry(token.as_str()).or_insert(0) += 1;
            total_tokens += 1;
        }
    }
    let mut kept: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_count)
        .collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    if kept.is_empty() {
        return Err(EmbeddingError::EmptyVocabulary);
    }
    let words: Vec<String> = kept.iter().map(|(w, _)| w.to_string()).collect();
    let counts: Vec<u64> = kept.iter().map(|&(_, c)| c).collect();
    let index = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    Ok(Vocab {
        words,
        counts,
        index,
        total_tokens,
    })
}
