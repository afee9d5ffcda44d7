//! Evaluation kit: random baseline sentences, pairwise comparison bundles
//! with randomized side assignment, analyst judgment ingestion, and the
//! derived preference/χ²/κ statistics.

mod erf;
mod stats;

pub use erf::erfc;
pub use stats::{chi2_survival, chi_square_preference, cohens_kappa, ChiSquareResult};

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Document;
use crate::matcher::{ExtractionRecord, Scope};

/// An analyst's three-way preference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    A,
    B,
    Neither,
}

impl Choice {
    pub(crate) fn as_index(self) -> usize {
        match self {
            Choice::A => 0,
            Choice::B => 1,
            Choice::Neither => 2,
        }
    }

    pub fn as_csv(self) -> &'static str {
        match self {
            Choice::A => "A",
            Choice::B => "B",
            Choice::Neither => "NEITHER",
        }
    }

    pub fn parse_csv(field: &str) -> Option<Choice> {
        match field.trim().to_ascii_uppercase().as_str() {
            "A" => Some(Choice::A),
            "B" => Some(Choice::B),
            "NEITHER" => Some(Choice::Neither),
            _ => None,
        }
    }
}

/// One side of an evaluation pair: the system label and the text shown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub label: String,
    pub text: String,
}

/// A randomized A/B presentation of two system outputs in one category.
/// Which system sits on side A is decided per pair from the seed; `swapped`
/// records whether the canonical (x, y) order was flipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationPair {
    pub pair_id: String,
    pub category: String,
    pub side_a: Side,
    pub side_b: Side,
    #[serde(skip, default)]
    pub swapped: bool,
}

/// One judgment row: `(pair_id, annotator_id)` is unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgmentRecord {
    pub pair_id: String,
    pub annotator_id: String,
    pub choice: Choice,
}

/// Judgment counts mapped back to system labels, with the preference rate
/// (non-Neither share) and per-label proportions among non-Neither
/// judgments. `proportions` is `None` when every judgment was Neither.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceSummary {
    pub label_counts: BTreeMap<String, u64>,
    pub neither: u64,
    pub total: u64,
    pub preference_rate: f64,
    pub proportions: Option<BTreeMap<String, f64>>,
}

/// Which record populations a pairing scheme draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairScheme {
    SingleVsBaseline,
    MultiVsBaseline,
    SingleVsMulti,
}

impl PairScheme {
    pub fn slug(self) -> &'static str {
        match self {
            PairScheme::SingleVsBaseline => "single-vs-baseline",
            PairScheme::MultiVsBaseline => "multi-vs-baseline",
            PairScheme::SingleVsMulti => "single-vs-multi",
        }
    }

    pub fn parse(s: &str) -> Option<PairScheme> {
        match s {
            "single-vs-baseline" => Some(PairScheme::SingleVsBaseline),
            "multi-vs-baseline" => Some(PairScheme::MultiVsBaseline),
            "single-vs-multi" => Some(PairScheme::SingleVsMulti),
            _ => None,
        }
    }
}

/// Pairs plus the per-category count of records left unmatched.
#[derive(Debug, Clone, PartialEq)]
pub struct PairBuild {
    pub pairs: Vec<EvaluationPair>,
    pub unpaired: BTreeMap<String, usize>,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("document has no sentences")]
    NoSentences,
    #[error("no category has records on both sides of the comparison")]
    InsufficientRecords,
    #[error("judgment references unknown pair {0:?}")]
    UnknownPair(String),
    #[error("label sequences have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("both preference counts are zero")]
    EmptyComparison,
    #[error("chi-square statistic must be finite and non-negative, got {0}")]
    DomainError(f64),
    #[error("only 1 degree of freedom is supported, got {0}")]
    UnsupportedDf(u32),
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

/// Uniformly random sentence from the document, deterministic for a given
/// seed. The draw may coincide with an extraction sentence; callers that care
/// can compare texts.
pub fn sample_baseline(doc: &Document, rng_seed: u64) -> Result<String, EvalError> {
    if doc.sentences.is_empty() {
        return Err(EvalError::NoSentences);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let sentence = rng.gen_range(0..doc.sentences.len());
    Ok(sentence_text(doc, sentence))
}

/// Original text of one sentence, reconstructed from token offsets.
pub fn sentence_text(doc: &Document, sentence: usize) -> String {
    let (start, end) = doc.sentences[sentence];
    let a = doc.tokens[start].char_start;
    let b = doc.tokens[end - 1].char_end;
    doc.text[a..b].to_string()
}

/// Build randomized evaluation pairs for one scheme.
///
/// Pairing stays within a category. The `*-vs-baseline` schemes pair each
/// in-scope record's span against its own baseline sentence (records without
/// one count as unpaired); `single-vs-multi` shuffles both scopes within a
/// category and zips them, reporting the length difference as unpaired.
/// `variant` (e.g. "seed" / "expand") is appended to system labels so
/// downstream comparisons can distinguish taxonomy stages. Side assignment
/// is randomized per pair; pair ids are stable for a given seed.
pub fn build_pairs(
    records: &[ExtractionRecord],
    scheme: PairScheme,
    rng_seed: u64,
    variant: Option<&str>,
) -> Result<PairBuild, EvalError> {
    let label = |base: &str| match variant {
        Some(v) => format!("{base}-{v}"),
        None => base.to_string(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut pairs = Vec::new();
    let mut unpaired: BTreeMap<String, usize> = BTreeMap::new();

    let mut by_category: BTreeMap<&str, Vec<&ExtractionRecord>> = BTreeMap::new();
    for record in records {
        by_category
            .entry(record.category.as_str())
            .or_default()
            .push(record);
    }

    let mut sequence = 0usize;
    for (category, category_records) in &by_category {
        let mut emit = |x: Side, y: Side, rng: &mut ChaCha8Rng, sequence: &mut usize| {
            let swapped = rng.gen_bool(0.5);
            let (side_a, side_b) = if swapped { (y, x) } else { (x, y) };
            pairs.push(EvaluationPair {
                pair_id: format!(
                    "{}:{}:{}:{:05}",
                    scheme.slug(),
                    variant.unwrap_or("all"),
                    category,
                    sequence
                ),
                category: category.to_string(),
                side_a,
                side_b,
                swapped,
            });
            *sequence += 1;
        };

        match scheme {
            PairScheme::SingleVsBaseline | PairScheme::MultiVsBaseline => {
                let (scope, base) = match scheme {
                    PairScheme::SingleVsBaseline => (Scope::SameSentence, "single"),
                    _ => (Scope::MultiSentence, "multi"),
                };
                for record in category_records.iter().filter(|r| r.scope == scope) {
                    match &record.baseline_text {
                        Some(baseline) if !baseline.is_empty() && !record.span_text.is_empty() => {
                            emit(
                                Side {
                                    label: label(base),
                                    text: record.span_text.clone(),
                                },
                                Side {
                                    label: label("baseline"),
                                    text: baseline.clone(),
                                },
                                &mut rng,
                                &mut sequence,
                            );
                        }
                        _ => *unpaired.entry(category.to_string()).or_insert(0) += 1,
                    }
                }
            }
            PairScheme::SingleVsMulti => {
                let mut singles: Vec<&&ExtractionRecord> = category_records
                    .iter()
                    .filter(|r| r.scope == Scope::SameSentence)
                    .collect();
                let mut multis: Vec<&&ExtractionRecord> = category_records
                    .iter()
                    .filter(|r| r.scope == Scope::MultiSentence)
                    .collect();
                shuffle(&mut singles, &mut rng);
                shuffle(&mut multis, &mut rng);
                let n = singles.len().min(multis.len());
                for (single, multi) in singles.iter().take(n).zip(multis.iter().take(n)) {
                    emit(
                        Side {
                            label: label("single"),
                            text: single.span_text.clone(),
                        },
                        Side {
                            label: label("multi"),
                            text: multi.span_text.clone(),
                        },
                        &mut rng,
                        &mut sequence,
                    );
                }
                let leftover = singles.len() + multis.len() - 2 * n;
                if leftover > 0 {
                    *unpaired.entry(category.to_string()).or_insert(0) += leftover;
                }
            }
        }
    }

    if pairs.is_empty() {
        return Err(EvalError::InsufficientRecords);
    }
    Ok(PairBuild { pairs, unpaired })
}

fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Tally judgments against their pairs, mapping A/B back to system labels
/// through each pair's randomized side assignment.
pub fn summarize(
    pairs: &[EvaluationPair],
    judgments: &[JudgmentRecord],
) -> Result<PreferenceSummary, EvalError> {
    let by_id: HashMap<&str, &EvaluationPair> =
        pairs.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    let mut label_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut neither = 0u64;
    for judgment in judgments {
        let pair = by_id
            .get(judgment.pair_id.as_str())
            .ok_or_else(|| EvalError::UnknownPair(judgment.pair_id.clone()))?;
        match judgment.choice {
            Choice::A => *label_counts.entry(pair.side_a.label.clone()).or_insert(0) += 1,
            Choice::B => *label_counts.entry(pair.side_b.label.clone()).or_insert(0) += 1,
            Choice::Neither => neither += 1,
        }
    }
    let total = judgments.len() as u64;
    let non_neither = total - neither;
    let preference_rate = if total == 0 {
        0.0
    } else {
        non_neither as f64 / total as f64
    };
    let proportions = if non_neither == 0 {
        None
    } else {
        Some(
            label_counts
                .iter()
                .map(|(label, &count)| (label.clone(), count as f64 / non_neither as f64))
                .collect(),
        )
    };
    Ok(PreferenceSummary {
        label_counts,
        neither,
        total,
        preference_rate,
        proportions,
    })
}

/// One label-pair comparison with its χ² test over non-Neither counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub label_x: String,
    pub label_y: String,
    pub count_x: u64,
    pub count_y: u64,
    pub neither: u64,
    pub chi2: f64,
    pub df: u32,
    pub p: f64,
}

/// Full evaluation report: per-pairing χ² results, the overall preference
/// summary, per-category κ where doubly annotated pairs exist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub comparisons: Vec<ComparisonResult>,
    pub preference: PreferenceSummary,
    pub kappa_by_category: BTreeMap<String, Option<f64>>,
    pub doubly_annotated_pairs: usize,
}

/// Assemble the evaluation report from pairs and judgments.
///
/// Judgments group by their pair's unordered label pair; each group gets a
/// χ² test on the two non-Neither counts (groups where both are zero are
/// reported without a test, with p = 1). κ per category aligns the two
/// lowest annotator ids on every pair with at least two judgments.
pub fn evaluation_report(
    pairs: &[EvaluationPair],
    judgments: &[JudgmentRecord],
) -> Result<EvaluationReport, EvalError> {
    let by_id: HashMap<&str, &EvaluationPair> =
        pairs.iter().map(|p| (p.pair_id.as_str(), p)).collect();

    // (label_x, label_y) -> (count_x, count_y, neither), labels sorted.
    let mut groups: BTreeMap<(String, String), (u64, u64, u64)> = BTreeMap::new();
    for judgment in judgments {
        let pair = by_id
            .get(judgment.pair_id.as_str())
            .ok_or_else(|| EvalError::UnknownPair(judgment.pair_id.clone()))?;
        let (mut x, mut y) = (pair.side_a.label.clone(), pair.side_b.label.clone());
        let mut choice = judgment.choice;
        if x > y {
            std::mem::swap(&mut x, &mut y);
            choice = match choice {
                Choice::A => Choice::B,
                Choice::B => Choice::A,
                Choice::Neither => Choice::Neither,
            };
        }
        let entry = groups.entry((x, y)).or_insert((0, 0, 0));
        match choice {
            Choice::A => entry.0 += 1,
            Choice::B => entry.1 += 1,
            Choice::Neither => entry.2 += 1,
        }
    }

    let mut comparisons = Vec::new();
    for ((label_x, label_y), (count_x, count_y, neither)) in groups {
        let (chi2, p) = match chi_square_preference(count_x, count_y) {
            Ok(result) => (result.chi2, result.p),
            Err(EvalError::EmptyComparison) => (0.0, 1.0),
            Err(e) => return Err(e),
        };
        comparisons.push(ComparisonResult {
            label_x,
            label_y,
            count_x,
            count_y,
            neither,
            chi2,
            df: 1,
            p,
        });
    }

    let preference = summarize(pairs, judgments)?;

    // Per-category κ over doubly annotated pairs.
    let mut per_pair: HashMap<&str, Vec<&JudgmentRecord>> = HashMap::new();
    for judgment in judgments {
        per_pair
            .entry(judgment.pair_id.as_str())
            .or_default()
            .push(judgment);
    }
    let mut doubly_annotated_pairs = 0usize;
    let mut kappa_inputs: BTreeMap<String, (Vec<Choice>, Vec<Choice>)> = BTreeMap::new();
    let mut pair_ids: Vec<&str> = per_pair.keys().copied().collect();
    pair_ids.sort_unstable();
    for pair_id in pair_ids {
        let mut records = per_pair[pair_id].clone();
        if records.len() < 2 {
            continue;
        }
        doubly_annotated_pairs += 1;
        records.sort_by(|a, b| a.annotator_id.cmp(&b.annotator_id));
        let category = by_id[pair_id].category.clone();
        let entry = kappa_inputs.entry(category).or_default();
        entry.0.push(records[0].choice);
        entry.1.push(records[1].choice);
    }
    let mut kappa_by_category: BTreeMap<String, Option<f64>> = BTreeMap::new();
    for pair in pairs {
        kappa_by_category
            .entry(pair.category.clone())
            .or_insert(None);
    }
    for (category, (first, second)) in kappa_inputs {
        let kappa = cohens_kappa(&first, &second)?;
        kappa_by_category.insert(category, Some(kappa));
    }

    Ok(EvaluationReport {
        comparisons,
        preference,
        kappa_by_category,
        doubly_annotated_pairs,
    })
}

/// Write pairs as JSON-lines (`{"pair_id","category","side_a":{"label","text"},"side_b":{...}}`).
pub fn write_pairs_jsonl(
    path: impl AsRef<Path>,
    pairs: &[EvaluationPair],
) -> Result<(), EvalError> {
    let path = path.as_ref();
    let io_err = |source| EvalError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut writer = std::io::BufWriter::new(file);
    for pair in pairs {
        let line = serde_json::to_string(pair).expect("pairs serialize");
        writeln!(writer, "{line}").map_err(io_err)?;
    }
    writer.flush().map_err(io_err)
}

pub fn read_pairs_jsonl(path: impl AsRef<Path>) -> Result<Vec<EvaluationPair>, EvalError> {
    let path = path.as_ref();
    let content = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut pairs = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let pair: EvaluationPair = serde_json::from_str(line).map_err(|e| EvalError::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            message: e.to_string(),
        })?;
        pairs.push(pair);
    }
    Ok(pairs)
}

/// Read the judgments CSV (`pair_id,annotator_id,choice`); a header row is
/// optional and malformed rows are reported with their line number.
pub fn read_judgments_csv(path: impl AsRef<Path>) -> Result<Vec<JudgmentRecord>, EvalError> {
    let path = path.as_ref();
    let content = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut judgments = Vec::new();
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    for (lineno, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && line.eq_ignore_ascii_case("pair_id,annotator_id,choice") {
            continue;
        }
        let parse_err = |message: String| EvalError::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err(format!(
                "expected 3 fields, got {}",
                fields.len()
            )));
        }
        let choice = Choice::parse_csv(fields[2])
            .ok_or_else(|| parse_err(format!("bad choice {:?}", fields[2])))?;
        let key = (fields[0].trim().to_string(), fields[1].trim().to_string());
        if key.0.is_empty() || key.1.is_empty() {
            return Err(parse_err(
                "pair_id and annotator_id must be non-empty".into(),
            ));
        }
        if let Some(previous) = seen.insert(key.clone(), lineno + 1) {
            return Err(parse_err(format!(
                "duplicate judgment for (pair {:?}, annotator {:?}); first seen on line {previous}",
                key.0, key.1
            )));
        }
        judgments.push(JudgmentRecord {
            pair_id: key.0,
            annotator_id: key.1,
            choice,
        });
    }
    Ok(judgments)
}

pub fn write_judgments_csv(
    path: impl AsRef<Path>,
    judgments: &[JudgmentRecord],
) -> Result<(), EvalError> {
    let path = path.as_ref();
    let io_err = |source| EvalError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut writer = std::io::BufWriter::new(file);
    writeln!(writer, "pair_id,annotator_id,choice").map_err(io_err)?;
    for judgment in judgments {
        writeln!(
            writer,
            "{},{},{}",
            judgment.pair_id,
            judgment.annotator_id,
            judgment.choice.as_csv()
        )
        .map_err(io_err)?;
    }
    writer.flush().map_err(io_err)
}
