//! Corpus loading: a directory of `.txt` files or a JSON-lines file.

use std::collections::HashSet;
use std::path::Path;

use serde::Deserialize;
use walkdir::WalkDir;

use super::{IngestError, RawDocument};

/// Read every `.txt` file under `dir` as one document; `doc_id` is the
/// relative path (with `/` separators). Documents come back sorted by doc_id.
pub fn read_corpus_dir(dir: impl AsRef<Path>) -> Result<Vec<RawDocument>, IngestError> {
    let dir = dir.as_ref();
    let mut docs = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| IngestError::Io {
            path: dir.display().to_string(),
            source: e.into(),
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        if entry.path().extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let text = std::fs::read_to_string(entry.path()).map_err(|source| IngestError::Io {
            path: entry.path().display().to_string(),
            source,
        })?;
        let doc_id = entry
            .path()
            .strip_prefix(dir)
            .unwrap_or(entry.path())
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        docs.push(RawDocument::new(doc_id, text));
    }
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    check_unique(&docs)?;
    Ok(docs)
}

#[derive(Deserialize)]
struct JsonlDoc {
    doc_id: String,
    text: String,
    #[serde(default)]
    source_tag: Option<String>,
}

/// Read a JSON-lines corpus: one `{"doc_id": ..., "text": ...}` object per
/// line. Blank lines are skipped. Documents come back sorted by doc_id.
pub fn read_corpus_jsonl(path: impl AsRef<Path>) -> Result<Vec<RawDocument>, IngestError> {
    let path = path.as_ref();
    let content = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut docs = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: JsonlDoc = serde_json::from_str(line).map_err(|e| IngestError::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            message: e.to_string(),
        })?;
        if parsed.doc_id.is_empty() {
            return Err(IngestError::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                message: "doc_id is empty".to_string(),
            });
        }
        docs.push(RawDocument {
            doc_id: parsed.doc_id,
            text: parsed.text,
            source_tag: parsed.source_tag,
        });
    }
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    check_unique(&docs)?;
    Ok(docs)
}

/// Dispatch on path type: directory → [`read_corpus_dir`], file → JSON-lines.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<RawDocument>, IngestError> {
    let path = path.as_ref();
    if path.is_dir() {
        read_corpus_dir(path)
    } else {
        read_corpus_jsonl(path)
    }
}

fn check_unique(docs: &[RawDocument]) -> Result<(), IngestError> {
    let mut seen = HashSet::new();
    for doc in docs {
        if !seen.insert(doc.doc_id.as_str()) {
            return Err(IngestError::DuplicateDocId(doc.doc_id.clone()));
        }
    }
    Ok(())
}
