//! Keyword/entity occurrence detection, bidirectional nearest pairing,
//! distance filtering, sentence-scope classification, and span retrieval.
//!
//! Every keyword occurrence pairs with the entity occurrence that minimizes
//! the intervening-token count, looking both directions. One keyword instance
//! yields at most one match; one entity occurrence may serve many keyword
//! instances. Ties at equal distance go to the preceding entity (lower start
//! index), which keeps output deterministic.
//!
//! The production lookup path uses sorted occurrence lists with binary
//! search, so each keyword costs O(log e) probes against e entity
//! occurrences instead of the brute-force O(e) scan.

use std::cell::Cell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::ingest::Document;
use crate::taxonomy::{EntityList, Taxonomy};

/// One located term instance: `term` indexes the term table handed to
/// [`find_occurrences`]; `start..end` are token indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub term: usize,
    pub start: usize,
    pub end: usize,
}

/// A keyword occurrence paired with its nearest entity occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub keyword_occ: Occurrence,
    pub entity_occ: Occurrence,
    pub distance: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    SameSentence,
    MultiSentence,
}

/// One extraction as written to the JSON-lines output. Field order is the
/// wire order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionRecord {
    pub doc_id: String,
    pub category: String,
    pub keyword: String,
    pub entity: String,
    pub distance: usize,
    pub scope: Scope,
    /// First and last sentence index covered, inclusive.
    pub sentence_span: (usize, usize),
    pub span_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_text: Option<String>,
}

/// Corpus-level size figures behind the per-document comparison estimate
/// `(m·a)×(n·b)`: m keyword terms averaging a instances per document, n
/// entities averaging b instances per document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub m: usize,
    pub a: f64,
    pub n: usize,
    pub b: f64,
    pub comparisons_estimate: f64,
}

impl CorpusStats {
    pub fn from_totals(
        m: usize,
        n: usize,
        total_keyword_occurrences: usize,
        total_entity_occurrences: usize,
        document_count: usize,
    ) -> Self {
        let a = if m == 0 || document_count == 0 {
            0.0
        } else {
            total_keyword_occurrences as f64 / (m as f64 * document_count as f64)
        };
        let b = if n == 0 || document_count == 0 {
            0.0
        } else {
            total_entity_occurrences as f64 / (n as f64 * document_count as f64)
        };
        CorpusStats {
            m,
            a,
            n,
            b,
            comparisons_estimate: (m as f64 * a) * (n as f64 * b),
        }
    }
}

/// Find every occurrence of every term in the document's lemma sequence.
///
/// Terms are lemma-token sequences; a match is a contiguous token run with
/// equal lemmas. Occurrences of distinct terms may overlap; occurrences of
/// one term are disjoint, taken greedily left to right. Output is sorted by
/// (start, end, term).
pub fn find_occurrences(doc: &Document, terms: &[Vec<String>]) -> Vec<Occurrence> {
    let lemmas: Vec<&str> = doc.tokens.iter().map(|t| t.lemma.as_str()).collect();
    let mut by_first: HashMap<&str, Vec<usize>> = HashMap::new();
    for (t, lemma_tokens) in terms.iter().enumerate() {
        if let Some(first) = lemma_tokens.first() {
            by_first.entry(first.as_str()).or_default().push(t);
        }
    }
    let mut next_allowed = vec![0usize; terms.len()];
    let mut occurrences = Vec::new();
    for i in 0..lemmas.len() {
        let Some(candidates) = by_first.get(lemmas[i]) else {
            continue;
        };
        for &t in candidates {
            if next_allowed[t] > i {
                continue;
            }
            let term = &terms[t];
            if i + term.len() <= lemmas.len()
                && term.iter().zip(&lemmas[i..]).all(|(a, b)| a.as_str() == *b)
            {
                occurrences.push(Occurrence {
                    term: t,
                    start: i,
                    end: i + term.len(),
                });
                next_allowed[t] = i + term.len();
            }
        }
    }
    occurrences.sort_by_key(|o| (o.start, o.end, o.term));
    occurrences
}

/// Count of token indices strictly between two occurrences; 0 when they
/// overlap or are adjacent. Symmetric.
pub fn token_distance(a: &Occurrence, b: &Occurrence) -> usize {
    if a.end <= b.start {
        b.start - a.end
    } else {
        // Overlapping spans saturate to zero.
        a.start.saturating_sub(b.end)
    }
}

/// Sorted-position index answering nearest-entity queries in O(log e) probes.
///
/// The index keeps occurrences sorted by start and by end plus a running
/// maximum of ends in start order, which is enough to locate the best
/// following, preceding, and overlapping candidate with three binary
/// searches. Probe counts are recorded for complexity instrumentation.
#[derive(Debug)]
pub struct NearestEntityIndex {
    by_start: Vec<Occurrence>,
    /// (end, start, position in `by_start`), sorted.
    by_end: Vec<(usize, usize, usize)>,
    /// Running max of `end` over `by_start` prefixes.
    prefix_max_end: Vec<usize>,
    probes: Cell<u64>,
}

impl NearestEntityIndex {
    pub fn new(mut occurrences: Vec<Occurrence>) -> Self {
        occurrences.sort_by_key(|o| (o.start, o.end, o.term));
        let mut by_end: Vec<(usize, usize, usize)> = occurrences
            .iter()
            .enumerate()
            .map(|(i, o)| (o.end, o.start, i))
            .collect();
        by_end.sort_unstable();
        let mut prefix_max_end = Vec::with_capacity(occurrences.len());
        let mut max_end = 0;
        for o in &occurrences {
            max_end = max_end.max(o.end);
            prefix_max_end.push(max_end);
        }
        NearestEntityIndex {
            by_start: occurrences,
            by_end,
            prefix_max_end,
            probes: Cell::new(0),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.by_start.is_empty()
    }

    /// Binary-search probe count accumulated across `nearest` calls.
    pub fn probe_count(&self) -> u64 {
        self.probes.get()
    }

    /// First index in `0..n` where `pred` is false (predicate is monotone
    /// true-then-false), counting each probe.
    fn partition_point(&self, n: usize, pred: impl Fn(usize) -> bool) -> usize {
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            self.probes.set(self.probes.get() + 1);
            if pred(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// The entity occurrence nearest to `keyword`, minimizing
    /// (distance, start, end); `None` when the index is empty.
    pub fn nearest(&self, keyword: &Occurrence) -> Option<(usize, Match)> {
        if self.by_start.is_empty() {
            return None;
        }
        let n = self.by_start.len();
        let mut best: Option<(usize, &Occurrence)> = None;
        let mut candidates: Vec<usize> = Vec::with_capacity(3);

        // Best following occurrence: minimal start >= keyword.end.
        let after = self.partition_point(n, |i| self.by_start[i].start < keyword.end);
        if after < n {
            candidates.push(after);
        }

        // Best preceding occurrence: maximal end <= keyword.start, minimal
        // start among equal ends.
        let before_count =
            self.partition_point(self.by_end.len(), |i| self.by_end[i].0 <= keyword.start);
        if before_count > 0 {
            let target_end = self.by_end[before_count - 1].0;
            let run_start =
                self.partition_point(self.by_end.len(), |i| self.by_end[i].0 < target_end);
            candidates.push(self.by_end[run_start].2);
        }

        // Best overlapping occurrence: first position whose prefix max end
        // exceeds keyword.start; overlap requires its start < keyword.end.
        let overlap = self.partition_point(n, |i| self.prefix_max_end[i] <= keyword.start);
        if overlap < n && self.by_start[overlap].start < keyword.end {
            candidates.push(overlap);
        }

        for idx in candidates {
            let occ = &self.by_start[idx];
            let better = match best {
                None => true,
                Some((_, cur)) => {
                    let cand = (token_distance(keyword, occ), occ.start, occ.end);
                    let curk = (token_distance(keyword, cur), cur.start, cur.end);
                    cand < curk
                }
            };
            if better {
                best = Some((idx, occ));
            }
        }

        best.map(|(idx, occ)| {
            (
                idx,
                Match {
                    keyword_occ: keyword.clone(),
                    entity_occ: occ.clone(),
                    distance: token_distance(keyword, occ),
                },
            )
        })
    }
}

/// Pair every keyword occurrence with its nearest entity occurrence,
/// searching both directions. Emits nothing when `entity_occs` is empty.
pub fn pair_nearest(keyword_occs: &[Occurrence], entity_occs: &[Occurrence]) -> Vec<Match> {
    let index = NearestEntityIndex::new(entity_occs.to_vec());
    keyword_occs
        .iter()
        .filter_map(|k| index.nearest(k).map(|(_, m)| m))
        .collect()
}

/// Keep matches with `distance <= max_distance`, preserving order.
pub fn filter_by_cutoff(matches: Vec<Match>, max_distance: usize) -> Vec<Match> {
    matches
        .into_iter()
        .filter(|m| m.distance <= max_distance)
        .collect()
}

/// Inclusive range of sentence indices covered by both occurrences.
pub fn sentence_span(m: &Match, doc: &Document) -> (usize, usize) {
    let sentence_indices = [
        doc.sentence_of(m.keyword_occ.start),
        doc.sentence_of(m.keyword_occ.end - 1),
        doc.sentence_of(m.entity_occ.start),
        doc.sentence_of(m.entity_occ.end - 1),
    ];
    let first = *sentence_indices.iter().min().expect("non-empty");
    let last = *sentence_indices.iter().max().expect("non-empty");
    (first, last)
}

/// Same sentence iff one sentence range contains both occurrences entirely.
pub fn classify_scope(m: &Match, doc: &Document) -> Scope {
    let (first, last) = sentence_span(m, doc);
    if first == last {
        Scope::SameSentence
    } else {
        Scope::MultiSentence
    }
}

/// Original text of the contiguous sentence range covering the match,
/// reconstructed from character offsets.
pub fn retrieve_span(m: &Match, doc: &Document) -> (String, (usize, usize)) {
    let (first, last) = sentence_span(m, doc);
    let start_token = doc.sentences[first].0;
    let end_token = doc.sentences[last].1 - 1;
    let a = doc.tokens[start_token].char_start;
    let b = doc.tokens[end_token].char_end;
    (doc.text[a..b].to_string(), (first, last))
}

/// Term tables prepared once per run and shared across documents: active
/// keyword terms (with category and display string) and entity alias forms
/// (with canonical names).
#[derive(Debug, Clone)]
pub struct ExtractionPlan {
    pub keyword_lemmas: Vec<Vec<String>>,
    /// (category, display term) per keyword table entry.
    pub keyword_info: Vec<(String, String)>,
    pub entity_lemmas: Vec<Vec<String>>,
    /// Canonical entity name per alias table entry.
    pub entity_info: Vec<String>,
}

impl ExtractionPlan {
    pub fn new(taxonomy: &Taxonomy, entities: &EntityList) -> Self {
        let mut keyword_lemmas = Vec::new();
        let mut keyword_info = Vec::new();
        for term in taxonomy.active_terms() {
            keyword_lemmas.push(term.lemma_tokens.clone());
            keyword_info.push((term.category.clone(), term.term.clone()));
        }
        let mut entity_lemmas = Vec::new();
        let mut entity_info = Vec::new();
        for entity in &entities.entities {
            for lemmas in &entity.alias_lemmas {
                entity_lemmas.push(lemmas.clone());
                entity_info.push(entity.canonical.clone());
            }
        }
        ExtractionPlan {
            keyword_lemmas,
            keyword_info,
            entity_lemmas,
            entity_info,
        }
    }

    /// Number of keyword terms (m) and entities are tracked by the caller;
    /// the alias table may be larger than the entity count.
    pub fn keyword_term_count(&self) -> usize {
        self.keyword_lemmas.len()
    }
}

/// Per-document extraction output plus the occurrence counts feeding
/// [`CorpusStats`].
#[derive(Debug, Clone)]
pub struct DocExtraction {
    pub records: Vec<ExtractionRecord>,
    pub keyword_occurrences: usize,
    pub entity_occurrences: usize,
}

/// Run the full per-document pipeline: find occurrences of both tables, pair
/// each keyword instance with its nearest entity instance, drop pairs beyond
/// the cutoff, classify sentence scope, and retrieve spans. Output is ordered
/// by (keyword start, entity start).
pub fn extract_with_plan(
    doc: &Document,
    plan: &ExtractionPlan,
    max_distance: usize,
) -> DocExtraction {
    let keyword_occs = find_occurrences(doc, &plan.keyword_lemmas);
    let entity_occs = find_occurrences(doc, &plan.entity_lemmas);
    let keyword_count = keyword_occs.len();
    let entity_count = entity_occs.len();

    let mut matches = filter_by_cutoff(pair_nearest(&keyword_occs, &entity_occs), max_distance);
    matches.sort_by_key(|m| {
        (
            m.keyword_occ.start,
            m.entity_occ.start,
            m.keyword_occ.end,
            m.keyword_occ.term,
        )
    });

    let records = matches
        .iter()
        .map(|m| {
            let scope = classify_scope(m, doc);
            let (span_text, span) = retrieve_span(m, doc);
            let (category, keyword) = plan.keyword_info[m.keyword_occ.term].clone();
            ExtractionRecord {
                doc_id: doc.doc_id.clone(),
                category,
                keyword,
                entity: plan.entity_info[m.entity_occ.term].clone(),
                distance: m.distance,
                scope,
                sentence_span: span,
                span_text,
                baseline_text: None,
            }
        })
        .collect();

    DocExtraction {
        records,
        keyword_occurrences: keyword_count,
        entity_occurrences: entity_count,
    }
}

/// Convenience wrapper building the term tables on the fly.
pub fn extract(
    doc: &Document,
    taxonomy: &Taxonomy,
    entities: &EntityList,
    max_distance: usize,
) -> Vec<ExtractionRecord> {
    extract_with_plan(doc, &ExtractionPlan::new(taxonomy, entities), max_distance).records
}
