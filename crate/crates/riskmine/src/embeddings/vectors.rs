//! Composed word vectors: similarity queries, top-k ranking, taxonomy
//! expansion, and the text export/import format.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use super::{dot, norm, EmbeddingError};
use crate::taxonomy::{ExpansionCandidates, SkippedSeed, Taxonomy, TermProposal, TermStatus};

/// A set of per-word vectors in a fixed vocabulary order.
///
/// This is the query-side view of a model: the trained model exports its
/// composed (word + subwords) representations here, and the text vector file
/// round-trips through it.
#[derive(Debug, Clone, PartialEq)]
pub struct WordVectors {
    dim: usize,
    words: Vec<String>,
    data: Vec<f64>,
    index: HashMap<String, usize>,
}

impl WordVectors {
    pub fn from_rows(dim: usize, rows: impl IntoIterator<Item = (String, Vec<f64>)>) -> Self {
        let mut words = Vec::new();
        let mut data = Vec::new();
        for (word, vector) in rows {
            assert_eq!(vector.len(), dim, "vector length mismatch for {word:?}");
            words.push(word);
            data.extend(vector);
        }
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        WordVectors {
            dim,
            words,
            data,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.index
            .get(word)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Cosine similarity between two stored words.
    pub fn similarity(&self, a: &str, b: &str) -> Result<f64, EmbeddingError> {
        let va = self
            .vector(a)
            .ok_or_else(|| EmbeddingError::OutOfVocabularyTerm(a.to_string()))?;
        let vb = self
            .vector(b)
            .ok_or_else(|| EmbeddingError::OutOfVocabularyTerm(b.to_string()))?;
        let na = norm(va);
        let nb = norm(vb);
        if na == 0.0 {
            return Err(EmbeddingError::ZeroVector(a.to_string()));
        }
        if nb == 0.0 {
            return Err(EmbeddingError::ZeroVector(b.to_string()));
        }
        Ok(dot(va, vb) / (na * nb))
    }

    /// The k words most similar to `term`, excluding `term` itself,
    /// descending score with ties broken by vocabulary order.
    pub fn top_k_similar(
        &self,
        term: &str,
        k: usize,
    ) -> Result<Vec<(String, f64)>, EmbeddingError> {
        let &query_idx = self
            .index
            .get(term)
            .ok_or_else(|| EmbeddingError::OutOfVocabularyTerm(term.to_string()))?;
        let query = self.row(query_idx);
        let query_norm = norm(query);
        if query_norm == 0.0 {
            return Err(EmbeddingError::ZeroVector(term.to_string()));
        }
        let mut scored: Vec<(usize, f64)> = (0..self.words.len())
            .filter(|&i| i != query_idx)
            .map(|i| {
                let row = self.row(i);
                let denominator = query_norm * norm(row);
                let score = if denominator == 0.0 {
                    f64::MIN
                } else {
                    dot(query, row) / denominator
                };
                (i, score)
            })
            .collect();
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        Ok(scored
            .into_iter()
            .take(k)
            .map(|(i, score)| (self.words[i].clone(), score))
            .collect())
    }

    /// Write the text vector format: a `vocab_size dim` header line, then one
    /// `word v1 .. v_dim` line per word. Components print with Rust's
    /// shortest-round-trip float formatting, so import reproduces them
    /// exactly and identical vector sets yield byte-identical files.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), EmbeddingError> {
        let path = path.as_ref();
        let io_err = |source| EmbeddingError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = std::fs::File::create(path).map_err(io_err)?;
        let mut writer = std::io::BufWriter::new(file);
        writeln!(writer, "{} {}", self.words.len(), self.dim).map_err(io_err)?;
        for (i, word) in self.words.iter().enumerate() {
            write!(writer, "{word}").map_err(io_err)?;
            for value in self.row(i) {
                write!(writer, " {value}").map_err(io_err)?;
            }
            writeln!(writer).map_err(io_err)?;
        }
        writer.flush().map_err(io_err)
    }

    /// Read the text vector format back.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, EmbeddingError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|source| EmbeddingError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let origin = path.display().to_string();
        let parse_err = |line: usize, message: String| EmbeddingError::Parse {
            path: origin.clone(),
            line,
            message,
        };
        let mut lines = content.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing header line".to_string()))?;
        let mut header_fields = header.split_whitespace();
        let vocab_size: usize = header_fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| parse_err(1, "bad vocab size".to_string()))?;
        let dim: usize = header_fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| parse_err(1, "bad dimension".to_string()))?;

        let mut rows = Vec::with_capacity(vocab_size);
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(' ');
            let word = fields
                .next()
                .ok_or_else(|| parse_err(lineno + 1, "missing word".to_string()))?
                .to_string();
            let vector: Vec<f64> = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| parse_err(lineno + 1, format!("bad float {f:?}: {e}")))
                })
                .collect::<Result<_, _>>()?;
            if vector.len() != dim {
                return Err(parse_err(
                    lineno + 1,
                    format!("expected {dim} components, got {}", vector.len()),
                ));
            }
            rows.push((word, vector));
        }
        if rows.len() != vocab_size {
            return Err(parse_err(
                1,
                format!("header claims {vocab_size} words, file has {}", rows.len()),
            ));
        }
        Ok(WordVectors::from_rows(dim, rows))
    }
}

/// Propose top-k expansion candidates for every active taxonomy term that is
/// in the vocabulary (multi-word terms are looked up in their
/// underscore-joined form). Out-of-vocabulary terms go to the skip report.
pub fn expand_taxonomy(
    vectors: &WordVectors,
    taxonomy: &Taxonomy,
    k: usize,
) -> ExpansionCandidates {
    let mut result = ExpansionCandidates::default();
    for term in taxonomy
        .terms
        .iter()
        .filter(|t| t.status == TermStatus::Active)
    {
        let vocab_key = term.lemma_tokens.join("_");
        match vectors.top_k_similar(&vocab_key, k) {
            Ok(ranked) => {
                for (word, score) in ranked {
                    result.proposals.push(TermProposal {
                        word,
                        score,
                        source_term: term.term.clone(),
                        category: term.category.clone(),
                    });
                }
            }
            Err(EmbeddingError::OutOfVocabularyTerm(_)) => {
                result.skipped.push(SkippedSeed {
                    term: term.term.clone(),
                    category: term.category.clone(),
                    reason: "not in model vocabulary".to_string(),
                });
            }
            Err(EmbeddingError::ZeroVector(_)) => {
                result.skipped.push(SkippedSeed {
                    term: term.term.clone(),
                    category: term.category.clone(),
                    reason: "zero vector".to_string(),
                });
            }
            Err(_) => unreachable!("top_k_similar only fails with OOV or zero vector"),
        }
    }
    result
}
