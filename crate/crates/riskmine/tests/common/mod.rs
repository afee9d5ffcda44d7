//! Shared test support: synthetic corpus generation and the brute-force
//! extraction oracle the production matcher is checked against.
// Each integration test target compiles this module separately and uses a
// different slice of it.
#![allow(dead_code)]
//!
//! The oracle deliberately avoids the production shortcuts: occurrences come
//! from a quadratic scan, distances from literally counting token indices,
//! sentence membership from a linear search, and spans from concatenating
//! per-sentence slices with their verbatim gaps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riskmine::ingest::{Document, Ingestor, RawDocument};
use riskmine::matcher::{ExtractionPlan, ExtractionRecord, Occurrence, Scope};
use riskmine::taxonomy::{EntityList, Taxonomy};

pub const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");

pub fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

/// Taxonomy, entities, and plan used by the synthetic-corpus tests.
pub struct TestWorld {
    pub ingestor: Ingestor,
    pub taxonomy: Taxonomy,
    pub entities: EntityList,
    pub plan: ExtractionPlan,
}

pub fn small_world() -> TestWorld {
    let ingestor = Ingestor::new();
    let taxonomy = Taxonomy::parse(
        "cybersecurity\thack\n\
         cybersecurity\tdata breach\n\
         cybersecurity\tdenial of service\n\
         terrorism\tpipe bomb\n\
         terrorism\tbomb\n\
         terrorism\tbio-terrorism\n\
         terrorism\tsuspicious package\n\
         legal\tlawsuit\n\
         legal\tclass action\n\
         legal\tfraud\n",
        "<test>",
        &ingestor,
    )
    .expect("test taxonomy parses");
    let entities = EntityList::parse(
        "CNN\nVerizon|Verizon Communications\nAcme Corp\nWalmart\nDelta Air Lines\n",
        "<test>",
        &ingestor,
    )
    .expect("test entities parse");
    let plan = ExtractionPlan::new(&taxonomy, &entities);
    TestWorld {
        ingestor,
        taxonomy,
        entities,
        plan,
    }
}

// Surface variants all normalize to the taxonomy/entity lemma sequences.
const KEYWORD_SURFACES: &[&str] = &[
    "hack",
    "hacks",
    "Hacked",
    "hacking",
    "data breach",
    "Data Breaches",
    "denial of service",
    "pipe bomb",
    "pipe bombs",
    "bomb",
    "Bombs",
    "bio-terrorism",
    "suspicious package",
    "suspicious packages",
    "lawsuit",
    "Lawsuits",
    "class action",
    "class actions",
    "fraud",
    "Fraud",
];

const ENTITY_SURFACES: &[&str] = &[
    "CNN",
    "cnn",
    "Verizon",
    "VERIZON",
    "Verizon Communications",
    "Acme Corp",
    "acme corp",
    "Walmart",
    "WALMART",
    "Delta Air Lines",
];

// Includes term fragments ("data", "pipe", "class") so partial overlaps and
// greedy multi-token matching get exercised organically.
const FILLERS: &[&str] = &[
    "the",
    "a",
    "market",
    "report",
    "quarter",
    "growth",
    "analyst",
    "share",
    "revenue",
    "outlook",
    "industry",
    "sector",
    "statement",
    "official",
    "source",
    "investor",
    "rose",
    "fell",
    "said",
    "today",
    "week",
    "year",
    "data",
    "pipe",
    "class",
    "service",
    "package",
    "new",
    "old",
    "plan",
];

/// One synthetic document of roughly `target_tokens` word units.
pub fn synthetic_text(rng: &mut ChaCha8Rng, target_tokens: usize) -> String {
    let mut sentences: Vec<String> = Vec::new();
    let mut emitted = 0usize;
    while emitted < target_tokens {
        let sentence_len = rng.gen_range(3..=22).min(target_tokens - emitted).max(1);
        let mut words: Vec<&str> = Vec::new();
        for _ in 0..sentence_len {
            let roll: f64 = rng.gen();
            if roll < 0.035 {
                words.push(KEYWORD_SURFACES[rng.gen_range(0..KEYWORD_SURFACES.len())]);
            } else if roll < 0.07 {
                words.push(ENTITY_SURFACES[rng.gen_range(0..ENTITY_SURFACES.len())]);
            } else {
                words.push(FILLERS[rng.gen_range(0..FILLERS.len())]);
            }
            emitted += 1;
        }
        let terminator = match rng.gen_range(0..10) {
            0 => "?",
            1 => "!",
            _ => ".",
        };
        let mut sentence = words.join(" ");
        sentence.push_str(terminator);
        sentences.push(sentence);
    }
    sentences.join(" ")
}

/// A corpus of `count` documents with token counts spread from 0 up to
/// `max_tokens`.
pub fn synthetic_corpus(count: usize, max_tokens: usize, seed: u64) -> Vec<RawDocument> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let target = match rng.gen_range(0..10) {
                0 => 0,
                1..=3 => rng.gen_range(1..=(max_tokens / 10).max(1)),
                4..=8 => rng.gen_range(1..=(max_tokens / 2).max(1)),
                _ => rng.gen_range(1..=max_tokens.max(1)),
            };
            let text = synthetic_text(&mut rng, target);
            RawDocument::new(format!("doc-{i:05}"), text)
        })
        .collect()
}

fn oracle_occurrences(lemmas: &[&str], terms: &[Vec<String>]) -> Vec<Occurrence> {
    let mut occurrences = Vec::new();
    for (t, term) in terms.iter().enumerate() {
        if term.is_empty() {
            continue;
        }
        let mut pos = 0;
        while pos + term.len() <= lemmas.len() {
            if term
                .iter()
                .zip(&lemmas[pos..])
                .all(|(a, b)| a.as_str() == *b)
            {
                occurrences.push(Occurrence {
                    term: t,
                    start: pos,
                    end: pos + term.len(),
                });
                pos += term.len();
            } else {
                pos += 1;
            }
        }
    }
    occurrences.sort_by_key(|o| (o.start, o.end, o.term));
    occurrences
}

/// Count token indices strictly between two occurrences by enumeration.
pub fn oracle_distance(a: &Occurrence, b: &Occurrence, token_count: usize) -> usize {
    let (first, second) = if a.start <= b.start { (a, b) } else { (b, a) };
    (0..token_count)
        .filter(|&i| i >= first.end && i < second.start)
        .count()
}

fn oracle_sentence_of(sentences: &[(usize, usize)], token: usize) -> usize {
    sentences
        .iter()
        .position(|&(start, end)| token >= start && token < end)
        .expect("token inside some sentence")
}

/// Span text built by concatenating per-sentence slices plus the verbatim
/// inter-sentence gaps.
fn oracle_span_text(doc: &Document, first: usize, last: usize) -> String {
    let mut out = String::new();
    let mut previous_end: Option<usize> = None;
    for s in first..=last {
        let (start_token, end_token) = doc.sentences[s];
        let a = doc.tokens[start_token].char_start;
        let b = doc.tokens[end_token - 1].char_end;
        if let Some(prev) = previous_end {
            out.push_str(&doc.text[prev..a]);
        }
        out.push_str(&doc.text[a..b]);
        previous_end = Some(b);
    }
    out
}

/// Brute-force reference extraction: all keyword-entity pairs, per-keyword
/// argmin on (distance, entity start, entity end), inclusive cutoff, linear
/// sentence classification, concatenated span text.
pub fn oracle_extract(
    doc: &Document,
    plan: &ExtractionPlan,
    cutoff: usize,
) -> Vec<ExtractionRecord> {
    let lemmas: Vec<&str> = doc.tokens.iter().map(|t| t.lemma.as_str()).collect();
    let keyword_occs = oracle_occurrences(&lemmas, &plan.keyword_lemmas);
    let entity_occs = oracle_occurrences(&lemmas, &plan.entity_lemmas);
    let token_count = doc.tokens.len();

    let mut picked: Vec<(Occurrence, Occurrence, usize)> = Vec::new();
    for keyword in &keyword_occs {
        let best = entity_occs
            .iter()
            .map(|e| (e, oracle_distance(keyword, e, token_count)))
            .min_by_key(|(e, d)| (*d, e.start, e.end));
        if let Some((entity, distance)) = best {
            if distance <= cutoff {
                picked.push((keyword.clone(), entity.clone(), distance));
            }
        }
    }
    picked.sort_by_key(|(k, e, _)| (k.start, e.start, k.end, k.term));

    picked
        .into_iter()
        .map(|(keyword, entity, distance)| {
            let sentence_indices = [
                oracle_sentence_of(&doc.sentences, keyword.start),
                oracle_sentence_of(&doc.sentences, keyword.end - 1),
                oracle_sentence_of(&doc.sentences, entity.start),
                oracle_sentence_of(&doc.sentences, entity.end - 1),
            ];
            let first = *sentence_indices.iter().min().unwrap();
            let last = *sentence_indices.iter().max().unwrap();
            let scope = if sentence_indices.iter().all(|&s| s == sentence_indices[0]) {
                Scope::SameSentence
            } else {
                Scope::MultiSentence
            };
            let (category, keyword_text) = plan.keyword_info[keyword.term].clone();
            ExtractionRecord {
                doc_id: doc.doc_id.clone(),
                category,
                keyword: keyword_text,
                entity: plan.entity_info[entity.term].clone(),
                distance,
                scope,
                sentence_span: (first, last),
                span_text: oracle_span_text(doc, first, last),
                baseline_text: None,
            }
        })
        .collect()
}

/// Mirror an occurrence list over a document of `token_count` tokens.
pub fn mirror_occurrences(occurrences: &[Occurrence], token_count: usize) -> Vec<Occurrence> {
    let mut mirrored: Vec<Occurrence> = occurrences
        .iter()
        .map(|o| Occurrence {
            term: o.term,
            start: token_count - o.end,
            end: token_count - o.start,
        })
        .collect();
    mirrored.sort_by_key(|o| (o.start, o.end, o.term));
    mirrored
}
