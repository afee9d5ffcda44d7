//! Document ingest: tokenization, lemmatization, and sentence segmentation.
//!
//! Raw text goes in, an immutable [`Document`] comes out — tokens with byte
//! offsets back into the original text, lowercase lemmas, and sentence
//! boundaries expressed as token-index ranges. Documents are plain values and
//! safe to share across worker threads.

mod corpus;
mod lemmatizer;
mod sentencizer;
mod tokenizer;

pub use corpus::{load_corpus, read_corpus_dir, read_corpus_jsonl};
pub use lemmatizer::Lemmatizer;
pub use sentencizer::Sentencizer;
pub use tokenizer::tokenize;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A document as it arrives from disk, before any processing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    pub doc_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_tag: Option<String>,
}

impl RawDocument {
    pub fn new(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        RawDocument {
            doc_id: doc_id.into(),
            text: text.into(),
            source_tag: None,
        }
    }
}

/// One token: the surface form, its lowercase lemma, and byte offsets into
/// the original text (`text[char_start..char_end] == surface`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub char_start: usize,
    pub char_end: usize,
    pub token_index: usize,
}

/// A processed document: ordered tokens plus sentence boundaries.
///
/// `sentences` holds `(start_token, end_token_exclusive)` ranges that
/// partition `0..tokens.len()` with no gaps or overlaps. The original text is
/// kept so sentence spans can be reconstructed from character offsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub text: String,
    pub tokens: Vec<Token>,
    pub sentences: Vec<(usize, usize)>,
}

impl Document {
    /// Index of the sentence containing `token_index`.
    ///
    /// Panics if the index is outside the token range (sentence ranges
    /// partition it, so every valid index belongs to exactly one sentence).
    pub fn sentence_of(&self, token_index: usize) -> usize {
        debug_assert!(token_index < self.tokens.len());
        match self
            .sentences
            .binary_search_by_key(&token_index, |&(start, _)| start)
        {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    /// Lemmas of all tokens, in order.
    pub fn lemmas(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.lemma.as_str()).collect()
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("invalid document: doc_id is empty")]
    InvalidDocument,
    #[error("duplicate doc_id {0:?} in corpus")]
    DuplicateDocId(String),
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

/// Shared tokenize → lemmatize → sentencize pipeline.
///
/// Holds the lemma exception table and the abbreviation list; the default
/// tables are compiled into the binary, and both can be replaced with files
/// in the one-entry-per-line format.
#[derive(Debug, Clone)]
pub struct Ingestor {
    lemmatizer: Lemmatizer,
    sentencizer: Sentencizer,
}

impl Default for Ingestor {
    fn default() -> Self {
        Ingestor::new()
    }
}

impl Ingestor {
    pub fn new() -> Self {
        Ingestor {
            lemmatizer: Lemmatizer::new(),
            sentencizer: Sentencizer::new(),
        }
    }

    pub fn with_tables(lemmatizer: Lemmatizer, sentencizer: Sentencizer) -> Self {
        Ingestor {
            lemmatizer,
            sentencizer,
        }
    }

    pub fn lemmatizer(&self) -> &Lemmatizer {
        &self.lemmatizer
    }

    /// Lemmatize a single surface form. See [`Lemmatizer::lemmatize`].
    pub fn lemmatize(&self, surface: &str) -> String {
        self.lemmatizer.lemmatize(surface)
    }

    /// Sentence boundaries for a token sequence. See [`Sentencizer::sentencize`].
    pub fn sentencize(&self, tokens: &[Token]) -> Vec<(usize, usize)> {
        self.sentencizer.sentencize(tokens)
    }

    /// Full pipeline: tokenize, fill lemmas, mark sentence boundaries.
    ///
    /// Pure function of its input — identical `raw` always yields an
    /// identical `Document`.
    pub fn ingest(&self, raw: &RawDocument) -> Result<Document, IngestError> {
        if raw.doc_id.is_empty() {
            return Err(IngestError::InvalidDocument);
        }
        let mut tokens = tokenize(&raw.text);
        for token in &mut tokens {
            token.lemma = self.lemmatizer.lemmatize(&token.surface);
        }
        let sentences = self.sentencizer.sentencize(&tokens);
        Ok(Document {
            doc_id: raw.doc_id.clone(),
            text: raw.text.clone(),
            tokens,
            sentences,
        })
    }

    /// Tokenize and lemmatize a free-standing phrase (e.g. a taxonomy term),
    /// returning its lemma token sequence.
    pub fn lemma_tokens(&self, phrase: &str) -> Vec<String> {
        tokenize(phrase)
            .iter()
            .map(|t| self.lemmatizer.lemmatize(&t.surface))
            .collect()
    }
}
