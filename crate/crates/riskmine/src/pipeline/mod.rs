//! End-to-end pipeline commands: extract, train, expand, curate, pairs,
//! eval, stats. Every command is a plain function over [`PipelineConfig`] so
//! the thin CLI binary and the examples share one implementation.
//!
//! Documents fan out across a rayon pool with no shared mutable state; per
//! document results are collected in corpus order, which makes the output
//! identical for any worker count. All randomness derives labeled sub-seeds
//! from the one configured seed.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embeddings::{
    join_phrases, train_skipgram, EmbeddingConfig, EmbeddingError, TrainMode, WordVectors,
};
use crate::evalkit::{
    self, build_pairs, read_judgments_csv, read_pairs_jsonl, sample_baseline, write_pairs_jsonl,
    EvalError, EvaluationReport, PairScheme,
};
use crate::ingest::{load_corpus, Document, IngestError, Ingestor, Lemmatizer, Sentencizer};
use crate::matcher::{CorpusStats, ExtractionPlan, ExtractionRecord, Scope};
use crate::taxonomy::{
    append_decision_log, expansion_report, CurationDecision, EntityList, ExpansionReport, Taxonomy,
    TaxonomyError, TermStatus,
};
use crate::util::{corpus_fingerprint, sub_seed};

/// Run configuration shared by all commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub corpus_path: PathBuf,
    pub taxonomy_path: PathBuf,
    pub entities_path: PathBuf,
    /// Maximum intervening-token distance for a keyword-entity pair.
    pub cutoff: usize,
    /// Expansion candidates per seed term.
    pub top_k: usize,
    pub rng_seed: u64,
    /// Worker count for document fan-out (and non-deterministic training).
    pub jobs: usize,
    pub output_dir: PathBuf,
    pub embedding: EmbeddingConfig,
    /// Force single-threaded, bit-reproducible embedding training.
    pub deterministic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abbreviations_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma_exceptions_path: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(
        corpus_path: impl Into<PathBuf>,
        taxonomy_path: impl Into<PathBuf>,
        entities_path: impl Into<PathBuf>,
        output_dir: impl Into<PathBuf>,
    ) -> Self {
        PipelineConfig {
            corpus_path: corpus_path.into(),
            taxonomy_path: taxonomy_path.into(),
            entities_path: entities_path.into(),
            cutoff: 100,
            top_k: 10,
            rng_seed: 1,
            jobs: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
            output_dir: output_dir.into(),
            embedding: EmbeddingConfig::default(),
            deterministic: true,
            abbreviations_path: None,
            lemma_exceptions_path: None,
        }
    }

    fn ingestor(&self) -> Result<Ingestor, PipelineError> {
        let lemmatizer = match &self.lemma_exceptions_path {
            Some(path) => Lemmatizer::from_file(path)?,
            None => Lemmatizer::new(),
        };
        let sentencizer = match &self.abbreviations_path {
            Some(path) => Sentencizer::from_file(path)?,
            None => Sentencizer::new(),
        };
        Ok(Ingestor::with_tables(lemmatizer, sentencizer))
    }

    fn require(&self, path: &Path, what: &str) -> Result<(), PipelineError> {
        if path.exists() {
            Ok(())
        } else {
            Err(PipelineError::InvalidConfig(format!(
                "{what} path {} does not exist",
                path.display()
            )))
        }
    }

    fn validate_common(&self) -> Result<(), PipelineError> {
        if self.jobs == 0 {
            return Err(PipelineError::InvalidConfig("jobs must be >= 1".into()));
        }
        if self.top_k == 0 {
            return Err(PipelineError::InvalidConfig("top_k must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("document {doc_id:?}: {source}")]
    Doc {
        doc_id: String,
        #[source]
        source: IngestError,
    },
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Eval(#[from] EvalError),
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

impl PipelineError {
    /// Exit-code class: 1 for usage/configuration problems, 2 for data
    /// errors encountered while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::InvalidConfig(_) => 1,
            _ => 2,
        }
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Record counts by scope and by category, plus how many baseline draws
/// landed inside their record's own extraction span.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RecordCounts {
    pub total: usize,
    pub by_scope: BTreeMap<String, usize>,
    pub by_category: BTreeMap<String, usize>,
    pub baseline_coincidences: usize,
}

/// Written once per extraction run; identical config + corpus reproduce
/// identical record output, and the fingerprint ties the two together.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: PipelineConfig,
    pub corpus_fingerprint: String,
    pub document_count: usize,
    /// Seconds per stage.
    pub stage_timings: BTreeMap<String, f64>,
    pub record_counts: RecordCounts,
    pub corpus_stats: CorpusStats,
}

#[derive(Debug)]
pub struct ExtractOutcome {
    pub records_path: PathBuf,
    pub manifest_path: PathBuf,
    pub manifest: RunManifest,
    pub records: Vec<ExtractionRecord>,
}

fn build_pool(jobs: usize) -> Result<rayon::ThreadPool, PipelineError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| PipelineError::InvalidConfig(format!("thread pool: {e}")))
}

fn ensure_output_dir(config: &PipelineConfig) -> Result<(), PipelineError> {
    std::fs::create_dir_all(&config.output_dir).map_err(io_err(&config.output_dir))
}

fn ingest_corpus(
    config: &PipelineConfig,
    ingestor: &Ingestor,
    pool: &rayon::ThreadPool,
) -> Result<(Vec<Document>, String), PipelineError> {
    let raw_docs = load_corpus(&config.corpus_path)?;
    let fingerprint = corpus_fingerprint(
        raw_docs
            .iter()
            .map(|d| (d.doc_id.as_str(), d.text.as_str())),
    );
    let docs: Vec<Document> = pool.install(|| {
        raw_docs
            .par_iter()
            .map(|raw| {
                ingestor.ingest(raw).map_err(|source| PipelineError::Doc {
                    doc_id: raw.doc_id.clone(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok((docs, fingerprint))
}

/// Run ingest → extract over the corpus with `jobs` workers, fill per-record
/// baseline sentences, and write the sorted JSON-lines output plus the run
/// manifest. Per-document independence makes the output identical for any
/// worker count.
pub fn cmd_extract(config: &PipelineConfig) -> Result<ExtractOutcome, PipelineError> {
    config.validate_common()?;
    config.require(&config.corpus_path, "corpus")?;
    config.require(&config.taxonomy_path, "taxonomy")?;
    config.require(&config.entities_path, "entities")?;
    ensure_output_dir(config)?;

    let mut timings = BTreeMap::new();
    let started = Instant::now();
    let ingestor = config.ingestor()?;
    let taxonomy = Taxonomy::load(&config.taxonomy_path, &ingestor)?;
    let entities = EntityList::load(&config.entities_path, &ingestor)?;
    let plan = ExtractionPlan::new(&taxonomy, &entities);
    let pool = build_pool(config.jobs)?;
    let (docs, fingerprint) = ingest_corpus(config, &ingestor, &pool)?;
    timings.insert(
        "load_and_ingest".to_string(),
        started.elapsed().as_secs_f64(),
    );

    let extract_started = Instant::now();
    let seed = config.rng_seed;
    let cutoff = config.cutoff;
    let doc_outputs: Vec<(Vec<ExtractionRecord>, usize, usize)> = pool.install(|| {
        docs.par_iter()
            .map(|doc| {
                let output = crate::matcher::extract_with_plan(doc, &plan, cutoff);
                let mut records = output.records;
                for (i, record) in records.iter_mut().enumerate() {
                    let baseline_seed = sub_seed(seed, &format!("baseline:{}:{}", doc.doc_id, i));
                    record.baseline_text = sample_baseline(doc, baseline_seed).ok();
                }
                (
                    records,
                    output.keyword_occurrences,
                    output.entity_occurrences,
                )
            })
            .collect()
    });
    timings.insert(
        "extract".to_string(),
        extract_started.elapsed().as_secs_f64(),
    );

    let write_started = Instant::now();
    let mut records = Vec::new();
    let mut keyword_total = 0usize;
    let mut entity_total = 0usize;
    for (doc_records, keywords, entities_found) in doc_outputs {
        keyword_total += keywords;
        entity_total += entities_found;
        records.extend(doc_records);
    }

    let mut counts = RecordCounts {
        total: records.len(),
        ..Default::default()
    };
    for record in &records {
        let scope = match record.scope {
            Scope::SameSentence => "same_sentence",
            Scope::MultiSentence => "multi_sentence",
        };
        *counts.by_scope.entry(scope.to_string()).or_insert(0) += 1;
        *counts
            .by_category
            .entry(record.category.clone())
            .or_insert(0) += 1;
        if let Some(baseline) = &record.baseline_text {
            if record.span_text.contains(baseline.as_str()) {
                counts.baseline_coincidences += 1;
            }
        }
    }

    let records_path = config.output_dir.join("extractions.jsonl");
    write_records_jsonl(&records_path, &records)?;
    timings.insert("write".to_string(), write_started.elapsed().as_secs_f64());

    let corpus_stats = CorpusStats::from_totals(
        plan.keyword_term_count(),
        entities.len(),
        keyword_total,
        entity_total,
        docs.len(),
    );
    let manifest = RunManifest {
        config: config.clone(),
        corpus_fingerprint: fingerprint,
        document_count: docs.len(),
        stage_timings: timings,
        record_counts: counts,
        corpus_stats,
    };
    let manifest_path = config.output_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&manifest_path, json).map_err(io_err(&manifest_path))?;

    Ok(ExtractOutcome {
        records_path,
        manifest_path,
        manifest,
        records,
    })
}

/// Write extraction records as JSON-lines via a temp file, so a failed run
/// leaves no partial output behind.
pub fn write_records_jsonl(path: &Path, records: &[ExtractionRecord]) -> Result<(), PipelineError> {
    let tmp_path = path.with_extension("jsonl.tmp");
    let write = || -> std::io::Result<()> {
        let file = std::fs::File::create(&tmp_path)?;
        let mut writer = std::io::BufWriter::new(file);
        for record in records {
            serde_json::to_writer(&mut writer, record)?;
            writer.write_all(b"\n")?;
        }
        writer.flush()
    };
    match write() {
        Ok(()) => std::fs::rename(&tmp_path, path).map_err(io_err(path)),
        Err(source) => {
            let _ = std::fs::remove_file(&tmp_path);
            Err(PipelineError::Io {
                path: path.display().to_string(),
                source,
            })
        }
    }
}

pub fn read_records_jsonl(path: &Path) -> Result<Vec<ExtractionRecord>, PipelineError> {
    let content = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut records = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: ExtractionRecord =
            serde_json::from_str(line).map_err(|e| PipelineError::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
        records.push(record);
    }
    Ok(records)
}

/// Sidecar written next to the vector file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub embedding: EmbeddingConfig,
    pub corpus_fingerprint: String,
    pub vocab_size: usize,
    pub dim: usize,
    pub deterministic: bool,
    pub epoch_mean_loss: Vec<f64>,
}

#[derive(Debug)]
pub struct TrainOutcome {
    pub vectors_path: PathBuf,
    pub metadata_path: PathBuf,
    pub metadata: ModelMetadata,
}

/// Build the training corpus (lemmatized sentences with multi-word active
/// taxonomy terms joined into single tokens) and train the skipgram model;
/// writes the text vector file and its metadata sidecar.
pub fn cmd_train(config: &PipelineConfig) -> Result<TrainOutcome, PipelineError> {
    config.validate_common()?;
    config.require(&config.corpus_path, "corpus")?;
    config.require(&config.taxonomy_path, "taxonomy")?;
    ensure_output_dir(config)?;

    let ingestor = config.ingestor()?;
    let taxonomy = Taxonomy::load(&config.taxonomy_path, &ingestor)?;
    let pool = build_pool(config.jobs)?;
    let (docs, fingerprint) = ingest_corpus(config, &ingestor, &pool)?;
    let sentences = training_sentences(&docs, &taxonomy);

    let mode = if config.deterministic {
        TrainMode::Deterministic
    } else {
        TrainMode::Parallel {
            threads: config.jobs,
        }
    };
    let (model, report) = train_skipgram(&sentences, &config.embedding, mode)?;

    let vectors_path = config.output_dir.join("vectors.vec");
    model.to_word_vectors().save(&vectors_path)?;
    let metadata = ModelMetadata {
        embedding: config.embedding.clone(),
        corpus_fingerprint: fingerprint,
        vocab_size: model.vocab.len(),
        dim: config.embedding.dim,
        deterministic: config.deterministic,
        epoch_mean_loss: report.epoch_mean_loss,
    };
    let metadata_path = config.output_dir.join("vectors.vec.meta.json");
    let json = serde_json::to_string_pretty(&metadata).expect("metadata serializes");
    std::fs::write(&metadata_path, json).map_err(io_err(&metadata_path))?;

    Ok(TrainOutcome {
        vectors_path,
        metadata_path,
        metadata,
    })
}

/// Per-sentence lemma sequences with multi-word active terms phrase-joined.
pub fn training_sentences(docs: &[Document], taxonomy: &Taxonomy) -> Vec<Vec<String>> {
    let phrases: Vec<Vec<String>> = taxonomy
        .active_terms()
        .filter(|t| t.lemma_tokens.len() >= 2)
        .map(|t| t.lemma_tokens.clone())
        .collect();
    let mut sentences = Vec::new();
    for doc in docs {
        for &(start, end) in &doc.sentences {
            let lemmas: Vec<String> = doc.tokens[start..end]
                .iter()
                .map(|t| t.lemma.clone())
                .collect();
            sentences.push(join_phrases(&lemmas, &phrases));
        }
    }
    sentences
}

#[derive(Debug)]
pub struct ExpandOutcome {
    pub taxonomy_path: PathBuf,
    pub candidates_path: PathBuf,
    pub skip_report_path: PathBuf,
    pub report_path: PathBuf,
    pub report: ExpansionReport,
    pub added: usize,
    pub skipped: usize,
}

/// Propose top-k candidates from the trained vectors, merge them through the
/// cleanup filters, and write the updated taxonomy, the per-candidate detail
/// file (for curation), the skip report, and the expansion report.
pub fn cmd_expand(
    config: &PipelineConfig,
    vectors_path: Option<&Path>,
) -> Result<ExpandOutcome, PipelineError> {
    config.validate_common()?;
    config.require(&config.taxonomy_path, "taxonomy")?;
    ensure_output_dir(config)?;
    let default_vectors = config.output_dir.join("vectors.vec");
    let vectors_path = vectors_path.unwrap_or(&default_vectors);
    config.require(vectors_path, "vectors")?;

    let ingestor = config.ingestor()?;
    let taxonomy = Taxonomy::load(&config.taxonomy_path, &ingestor)?;
    let vectors = WordVectors::load(vectors_path)?;
    let candidates = crate::embeddings::expand_taxonomy(&vectors, &taxonomy, config.top_k);
    let outcome = taxonomy.merge_expansion(&candidates, &ingestor);
    let report = expansion_report(&taxonomy, &outcome.taxonomy)?;

    let taxonomy_path = config.output_dir.join("taxonomy_expanded.tsv");
    outcome.taxonomy.save(&taxonomy_path)?;

    let candidates_path = config.output_dir.join("candidates.jsonl");
    {
        let file = std::fs::File::create(&candidates_path).map_err(io_err(&candidates_path))?;
        let mut writer = std::io::BufWriter::new(file);
        for proposal in &candidates.proposals {
            serde_json::to_writer(&mut writer, proposal).map_err(|e| PipelineError::Io {
                path: candidates_path.display().to_string(),
                source: e.into(),
            })?;
            writer.write_all(b"\n").map_err(io_err(&candidates_path))?;
        }
        writer.flush().map_err(io_err(&candidates_path))?;
    }

    let skip_report_path = config.output_dir.join("expansion_skipped.json");
    let json = serde_json::to_string_pretty(&candidates.skipped).expect("skips serialize");
    std::fs::write(&skip_report_path, json).map_err(io_err(&skip_report_path))?;

    let report_path = config.output_dir.join("expansion_report.json");
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(&report_path, json).map_err(io_err(&report_path))?;

    Ok(ExpandOutcome {
        taxonomy_path,
        candidates_path,
        skip_report_path,
        report_path,
        report,
        added: outcome.added,
        skipped: candidates.skipped.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurateMode<'a> {
    /// Apply decisions from a file: `term<TAB>category<TAB>accept|reject`.
    Batch(&'a Path),
    /// Review candidates on the terminal (a = accept, r = reject, s = skip,
    /// q = quit).
    Interactive,
}

#[derive(Debug)]
pub struct CurateOutcome {
    pub taxonomy_path: PathBuf,
    pub decisions_log_path: PathBuf,
    pub accepted: usize,
    pub rejected: usize,
    pub skipped: usize,
}

/// Apply curation decisions to candidate terms. Every decision is appended
/// to the decisions log; the updated taxonomy is written to the output
/// directory.
pub fn cmd_curate(
    config: &PipelineConfig,
    mode: CurateMode<'_>,
) -> Result<CurateOutcome, PipelineError> {
    config.validate_common()?;
    config.require(&config.taxonomy_path, "taxonomy")?;
    ensure_output_dir(config)?;

    let ingestor = config.ingestor()?;
    let mut taxonomy = Taxonomy::load(&config.taxonomy_path, &ingestor)?;
    let decisions_log_path = config.output_dir.join("curation_decisions.log");
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut skipped = 0usize;

    match mode {
        CurateMode::Batch(decisions_path) => {
            let content =
                std::fs::read_to_string(decisions_path).map_err(io_err(decisions_path))?;
            for (lineno, line) in content.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let fields: Vec<&str> = line.split('\t').collect();
                if fields.len() < 3 {
                    return Err(PipelineError::Parse {
                        path: decisions_path.display().to_string(),
                        line: lineno + 1,
                        message: "expected term<TAB>category<TAB>decision".to_string(),
                    });
                }
                let (term, category) = (fields[0], fields[1]);
                let decision = match fields[2] {
                    "accept" => CurationDecision::Accept,
                    "reject" => CurationDecision::Reject,
                    other => {
                        return Err(PipelineError::Parse {
                            path: decisions_path.display().to_string(),
                            line: lineno + 1,
                            message: format!("unknown decision {other:?}"),
                        })
                    }
                };
                taxonomy = taxonomy.curate(category, term, decision, &ingestor)?;
                append_decision_log(&decisions_log_path, term, category, decision)?;
                match decision {
                    CurationDecision::Accept => accepted += 1,
                    CurationDecision::Reject => rejected += 1,
                }
            }
        }
        CurateMode::Interactive => {
            let candidates: Vec<(String, String)> = taxonomy
                .terms
                .iter()
                .filter(|t| t.status == TermStatus::Candidate)
                .map(|t| (t.category.clone(), t.term.clone()))
                .collect();
            let candidate_details = load_candidate_details(&config.output_dir);
            let stdin = std::io::stdin();
            for (category, term) in candidates {
                match candidate_details.get(&(category.clone(), term.clone())) {
                    Some((source, score)) => println!(
                        "[{category}] {term}  (from seed {source:?}, similarity {score:.4})"
                    ),
                    None => println!("[{category}] {term}"),
                }
                print!("  accept/reject/skip/quit [a/r/s/q]? ");
                std::io::stdout().flush().ok();
                let mut answer = String::new();
                if stdin.read_line(&mut answer).is_err() {
                    break;
                }
                match answer.trim() {
                    "a" => {
                        taxonomy = taxonomy.curate(
                            &category,
                            &term,
                            CurationDecision::Accept,
                            &ingestor,
                        )?;
                        append_decision_log(
                            &decisions_log_path,
                            &term,
                            &category,
                            CurationDecision::Accept,
                        )?;
                        accepted += 1;
                    }
                    "r" => {
                        taxonomy = taxonomy.curate(
                            &category,
                            &term,
                            CurationDecision::Reject,
                            &ingestor,
                        )?;
                        append_decision_log(
                            &decisions_log_path,
                            &term,
                            &category,
                            CurationDecision::Reject,
                        )?;
                        rejected += 1;
                    }
                    "q" => break,
                    _ => skipped += 1,
                }
            }
        }
    }

    let taxonomy_path = config.output_dir.join("taxonomy_curated.tsv");
    taxonomy.save(&taxonomy_path)?;
    Ok(CurateOutcome {
        taxonomy_path,
        decisions_log_path,
        accepted,
        rejected,
        skipped,
    })
}

/// (category, term) → (source seed, score) from candidates.jsonl, if present.
fn load_candidate_details(output_dir: &Path) -> BTreeMap<(String, String), (String, f64)> {
    let mut details = BTreeMap::new();
    let path = output_dir.join("candidates.jsonl");
    let Ok(content) = std::fs::read_to_string(path) else {
        return details;
    };
    for line in content.lines() {
        if let Ok(proposal) = serde_json::from_str::<crate::taxonomy::TermProposal>(line) {
            details.insert(
                (proposal.category, proposal.word.replace('_', " ")),
                (proposal.source_term, proposal.score),
            );
        }
    }
    details
}

#[derive(Debug)]
pub struct PairsOutcome {
    pub pairs_path: PathBuf,
    pub pair_count: usize,
    pub unpaired: BTreeMap<String, usize>,
}

/// Build randomized evaluation pairs from an extraction record file.
pub fn cmd_pairs(
    config: &PipelineConfig,
    records_path: &Path,
    scheme: PairScheme,
    variant: Option<&str>,
) -> Result<PairsOutcome, PipelineError> {
    config.validate_common()?;
    config.require(records_path, "records")?;
    ensure_output_dir(config)?;

    let records = read_records_jsonl(records_path)?;
    let seed = sub_seed(
        config.rng_seed,
        &format!("pairs:{}:{}", scheme.slug(), variant.unwrap_or("all")),
    );
    let build = build_pairs(&records, scheme, seed, variant)?;
    let pairs_path = config
        .output_dir
        .join(format!("pairs_{}.jsonl", scheme.slug()));
    write_pairs_jsonl(&pairs_path, &build.pairs)?;
    Ok(PairsOutcome {
        pairs_path,
        pair_count: build.pairs.len(),
        unpaired: build.unpaired,
    })
}

#[derive(Debug)]
pub struct EvalOutcome {
    pub report_path: PathBuf,
    pub report: EvaluationReport,
}

/// Evaluate judgments against their pairs file and write the statistics
/// report (per-comparison χ², preference summary, per-category κ).
pub fn cmd_eval(
    config: &PipelineConfig,
    pairs_path: &Path,
    judgments_path: &Path,
) -> Result<EvalOutcome, PipelineError> {
    config.require(pairs_path, "pairs")?;
    config.require(judgments_path, "judgments")?;
    ensure_output_dir(config)?;

    let pairs = read_pairs_jsonl(pairs_path)?;
    let judgments = read_judgments_csv(judgments_path)?;
    let report = evalkit::evaluation_report(&pairs, &judgments)?;
    let report_path = config.output_dir.join("eval_report.json");
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(&report_path, json).map_err(io_err(&report_path))?;
    Ok(EvalOutcome {
        report_path,
        report,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsOutcome {
    pub document_count: usize,
    pub token_count: usize,
    pub sentence_count: usize,
    pub corpus_stats: CorpusStats,
}

/// Scan the corpus and report the size figures behind the comparison
/// estimate, without writing extractions.
pub fn cmd_stats(config: &PipelineConfig) -> Result<StatsOutcome, PipelineError> {
    config.validate_common()?;
    config.require(&config.corpus_path, "corpus")?;
    config.require(&config.taxonomy_path, "taxonomy")?;
    config.require(&config.entities_path, "entities")?;

    let ingestor = config.ingestor()?;
    let taxonomy = Taxonomy::load(&config.taxonomy_path, &ingestor)?;
    let entities = EntityList::load(&config.entities_path, &ingestor)?;
    let plan = ExtractionPlan::new(&taxonomy, &entities);
    let pool = build_pool(config.jobs)?;
    let (docs, _) = ingest_corpus(config, &ingestor, &pool)?;

    let totals: Vec<(usize, usize)> = pool.install(|| {
        docs.par_iter()
            .map(|doc| {
                let keywords = crate::matcher::find_occurrences(doc, &plan.keyword_lemmas).len();
                let entities_found =
                    crate::matcher::find_occurrences(doc, &plan.entity_lemmas).len();
                (keywords, entities_found)
            })
            .collect()
    });
    let keyword_total: usize = totals.iter().map(|t| t.0).sum();
    let entity_total: usize = totals.iter().map(|t| t.1).sum();
    Ok(StatsOutcome {
        document_count: docs.len(),
        token_count: docs.iter().map(|d| d.tokens.len()).sum(),
        sentence_count: docs.iter().map(|d| d.sentences.len()).sum(),
        corpus_stats: CorpusStats::from_totals(
            plan.keyword_term_count(),
            entities.len(),
            keyword_total,
            entity_total,
            docs.len(),
        ),
    })
}
