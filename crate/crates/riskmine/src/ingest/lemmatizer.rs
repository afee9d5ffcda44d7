//! Exception-table + suffix-rule lemmatizer.

use std::collections::HashMap;
use std::path::Path;

use super::IngestError;

const DEFAULT_EXCEPTIONS: &str = include_str!("../../data/lemma_exceptions.txt");

/// Lowercasing lemmatizer with an irregular-form lookup table and ordered
/// suffix-stripping rules.
///
/// Rules, tried in order on each pass: possessive `'s`, plural (`-ies` → `y`,
/// `-es` after a sibilant or `o`, `-s` unless the word ends in `ss`), `-ing`,
/// `-ed`. Suffix rules require a stem of at least 3 characters (`-ing`/`-ed`
/// also require a vowel in the stem) and are re-applied until a fixed point,
/// which makes `lemmatize` idempotent. Exception-table targets are registered
/// as fixed points for the same reason.
#[derive(Debug, Clone)]
pub struct Lemmatizer {
    exceptions: HashMap<String, String>,
}

impl Default for Lemmatizer {
    fn default() -> Self {
        Lemmatizer::new()
    }
}

impl Lemmatizer {
    /// Lemmatizer with the built-in exception table.
    pub fn new() -> Self {
        Lemmatizer::parse_table(DEFAULT_EXCEPTIONS, "<built-in>")
            .expect("built-in lemma exception table is well-formed")
    }

    /// Load an exception table from a file (`surface<TAB>lemma` per line,
    /// `#` comments allowed).
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, IngestError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Lemmatizer::parse_table(&content, &path.display().to_string())
    }

    fn parse_table(content: &str, origin: &str) -> Result<Self, IngestError> {
        let mut exceptions = HashMap::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(2, '\t');
            let surface = parts.next().unwrap_or("").trim();
            let lemma = parts.next().map(str::trim).unwrap_or("");
            if surface.is_empty() || lemma.is_empty() {
                return Err(IngestError::Parse {
                    path: origin.to_string(),
                    line: lineno + 1,
                    message: "expected `surface<TAB>lemma`".to_string(),
                });
            }
            exceptions.insert(surface.to_lowercase(), lemma.to_lowercase());
        }
        // Make every mapping target a fixed point so the function stays
        // idempotent even when a target would otherwise match a suffix rule.
        let targets: Vec<String> = exceptions.values().cloned().collect();
        for target in targets {
            exceptions.entry(target.clone()).or_insert(target);
        }
        Ok(Lemmatizer { exceptions })
    }

    /// Lemma of a single surface form. Idempotent; never fails.
    pub fn lemmatize(&self, surface: &str) -> String {
        let mut word = surface.to_lowercase();
        if let Some(lemma) = self.exceptions.get(&word) {
            return lemma.clone();
        }
        while let Some(stripped) = strip_one_suffix(&word) {
            word = stripped;
            if let Some(lemma) = self.exceptions.get(&word) {
                return lemma.clone();
            }
        }
        word
    }
}

const MIN_STEM: usize = 3;

fn has_vowel(s: &str) -> bool {
    s.chars()
        .any(|c| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y'))
}

fn strip_one_suffix(word: &str) -> Option<String> {
    let n = word.chars().count();

    if let Some(stem) = word.strip_suffix("'s") {
        if !stem.is_empty() {
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix("ies") {
        if n - 3 >= MIN_STEM {
            return Some(format!("{stem}y"));
        }
    }
    if let Some(stem) = word.strip_suffix("es") {
        let sibilant = stem.ends_with('s')
            || stem.ends_with('x')
            || stem.ends_with('z')
            || stem.ends_with('o')
            || stem.ends_with("ch")
            || stem.ends_with("sh");
        if sibilant && n - 2 >= MIN_STEM {
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix('s') {
        if !stem.ends_with('s') && n > MIN_STEM {
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix("ing") {
        if n - 3 >= MIN_STEM && has_vowel(stem) {
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix("ed") {
        if n - 2 >= MIN_STEM && has_vowel(stem) {
            return Some(stem.to_string());
        }
    }
    None
}
