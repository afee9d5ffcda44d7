//! Rule-based sentence boundary detection over token sequences.

use std::collections::HashSet;
use std::path::Path;

use super::{IngestError, Token};

const DEFAULT_ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

/// Sentence splitter driven by terminator tokens and an abbreviation list.
///
/// A break is placed after every `.`, `!`, or `?` token unless the preceding
/// token's lemma is a known abbreviation. Periods inside tokens ("u.s",
/// "3.14") never reach this rule because the tokenizer keeps them internal.
/// Any trailing partial sentence is closed at end of input, so the output
/// always partitions the token range.
#[derive(Debug, Clone)]
pub struct Sentencizer {
    abbreviations: HashSet<String>,
}

impl Default for Sentencizer {
    fn default() -> Self {
        Sentencizer::new()
    }
}

impl Sentencizer {
    /// Sentencizer with the built-in abbreviation list.
    pub fn new() -> Self {
        Sentencizer {
            abbreviations: parse_list(DEFAULT_ABBREVIATIONS),
        }
    }

    /// Load an abbreviation list (one entry per line, `#` comments allowed).
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, IngestError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Sentencizer {
            abbreviations: parse_list(&content),
        })
    }

    /// Sentence ranges as `(start_token, end_token_exclusive)` pairs.
    pub fn sentencize(&self, tokens: &[Token]) -> Vec<(usize, usize)> {
        let mut sentences = Vec::new();
        let mut start = 0;
        for (i, token) in tokens.iter().enumerate() {
            if !is_terminator(&token.surface) {
                continue;
            }
            let guarded = i > 0 && self.abbreviations.contains(&tokens[i - 1].lemma);
            if !guarded {
                sentences.push((start, i + 1));
                start = i + 1;
            }
        }
        if start < tokens.len() {
            sentences.push((start, tokens.len()));
        }
        sentences
    }
}

fn is_terminator(surface: &str) -> bool {
    matches!(surface, "." | "!" | "?")
}

fn parse_list(content: &str) -> HashSet<String> {
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}
