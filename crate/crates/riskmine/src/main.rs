//! Thin command-line front end over the pipeline functions.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use riskmine::embeddings::EmbeddingConfig;
use riskmine::evalkit::PairScheme;
use riskmine::pipeline::{
    cmd_curate, cmd_eval, cmd_expand, cmd_extract, cmd_pairs, cmd_stats, cmd_train, CurateMode,
    PipelineConfig, PipelineError,
};

#[derive(Parser)]
#[command(
    name = "riskmine",
    about = "Entity-risk relation extraction: match risk keywords to nearby entities, expand the taxonomy with subword embeddings, evaluate preferences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Corpus: directory of .txt files or a JSON-lines file
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Taxonomy TSV (category<TAB>term[<TAB>provenance[<TAB>status]])
    #[arg(long)]
    taxonomy: Option<PathBuf>,
    /// Entity list (one per line, aliases '|'-separated)
    #[arg(long)]
    entities: Option<PathBuf>,
    /// Maximum intervening-token distance for a pair
    #[arg(long, default_value_t = 100)]
    cutoff: usize,
    /// Expansion candidates per seed term
    #[arg(long = "top-k", default_value_t = 10)]
    top_k: usize,
    /// Master seed for all randomized steps
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker count (defaults to the available cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Single-threaded, bit-reproducible embedding training
    #[arg(long, default_value_t = false)]
    deterministic: bool,
    /// Abbreviation list overriding the built-in sentencizer table
    #[arg(long)]
    abbreviations: Option<PathBuf>,
    /// Lemma exception table overriding the built-in one
    #[arg(long)]
    lemma_exceptions: Option<PathBuf>,
}

#[derive(Args)]
struct EmbeddingArgs {
    #[arg(long, default_value_t = 100)]
    dim: usize,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    #[arg(long, default_value_t = 5)]
    min_count: u64,
    #[arg(long, default_value_t = 3)]
    ngram_min: usize,
    #[arg(long, default_value_t = 6)]
    ngram_max: usize,
    #[arg(long, default_value_t = 2_000_000)]
    buckets: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 0.05)]
    learning_rate: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Extract keyword-entity records from the corpus
    Extract {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Train subword skipgram vectors on the corpus
    Train {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        embedding: EmbeddingArgs,
    },
    /// Propose and merge taxonomy expansion candidates
    Expand {
        #[command(flatten)]
        common: CommonArgs,
        /// Vector file (defaults to <out>/vectors.vec)
        #[arg(long)]
        vectors: Option<PathBuf>,
    },
    /// Review expansion candidates (interactive, or --decisions batch file)
    Curate {
        #[command(flatten)]
        common: CommonArgs,
        /// Batch decisions file: term<TAB>category<TAB>accept|reject
        #[arg(long)]
        decisions: Option<PathBuf>,
    },
    /// Build randomized evaluation pairs from extraction records
    Pairs {
        #[command(flatten)]
        common: CommonArgs,
        /// Extraction records JSON-lines file
        #[arg(long)]
        records: PathBuf,
        /// single-vs-baseline | multi-vs-baseline | single-vs-multi
        #[arg(long)]
        scheme: String,
        /// Label suffix distinguishing taxonomy stages (e.g. seed, expand)
        #[arg(long)]
        variant: Option<String>,
    },
    /// Compute preference/χ²/κ statistics from judgments
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        /// Pairs JSON-lines file
        #[arg(long)]
        pairs: PathBuf,
        /// Judgments CSV (pair_id,annotator_id,choice)
        #[arg(long)]
        judgments: PathBuf,
    },
    /// Report corpus size figures and the comparison estimate
    Stats {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn build_config(common: &CommonArgs, what_needs: &[&str]) -> Result<PipelineConfig, PipelineError> {
    for &field in what_needs {
        let present = match field {
            "corpus" => common.corpus.is_some(),
            "taxonomy" => common.taxonomy.is_some(),
            "entities" => common.entities.is_some(),
            _ => true,
        };
        if !present {
            return Err(PipelineError::InvalidConfig(format!(
                "--{field} is required for this command"
            )));
        }
    }
    let mut config = PipelineConfig::new(
        common.corpus.clone().unwrap_or_default(),
        common.taxonomy.clone().unwrap_or_default(),
        common.entities.clone().unwrap_or_default(),
        common.out.clone(),
    );
    config.cutoff = common.cutoff;
    config.top_k = common.top_k;
    config.rng_seed = common.seed;
    if let Some(jobs) = common.jobs {
        config.jobs = jobs;
    }
    config.deterministic = common.deterministic;
    config.abbreviations_path = common.abbreviations.clone();
    config.lemma_exceptions_path = common.lemma_exceptions.clone();
    Ok(config)
}

fn apply_embedding(config: &mut PipelineConfig, args: &EmbeddingArgs, seed: u64) {
    config.embedding = EmbeddingConfig {
        dim: args.dim,
        window: args.window,
        negatives: args.negatives,
        min_count: args.min_count,
        ngram_min: args.ngram_min,
        ngram_max: args.ngram_max,
        bucket_count: args.buckets,
        epochs: args.epochs,
        learning_rate: args.learning_rate,
        rng_seed: seed,
    };
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Extract { common } => {
            let config = build_config(&common, &["corpus", "taxonomy", "entities"])?;
            let outcome = cmd_extract(&config)?;
            eprintln!(
                "extracted {} records from {} documents -> {}",
                outcome.manifest.record_counts.total,
                outcome.manifest.document_count,
                outcome.records_path.display()
            );
            eprintln!("manifest: {}", outcome.manifest_path.display());
        }
        Command::Train { common, embedding } => {
            let mut config = build_config(&common, &["corpus", "taxonomy"])?;
            apply_embedding(&mut config, &embedding, common.seed);
            let outcome = cmd_train(&config)?;
            eprintln!(
                "trained {} x {} vectors -> {}",
                outcome.metadata.vocab_size,
                outcome.metadata.dim,
                outcome.vectors_path.display()
            );
        }
        Command::Expand { common, vectors } => {
            let config = build_config(&common, &["taxonomy"])?;
            let outcome = cmd_expand(&config, vectors.as_deref())?;
            eprintln!(
                "added {} candidates ({} seeds skipped) -> {}",
                outcome.added,
                outcome.skipped,
                outcome.taxonomy_path.display()
            );
            for (category, increase) in &outcome.report.per_category {
                eprintln!(
                    "  {category}: {} -> {} (+{:.1}%)",
                    increase.before, increase.after, increase.percent_increase
                );
            }
            eprintln!(
                "  average increase: {:.1}%",
                outcome.report.average_percent_increase
            );
        }
        Command::Curate { common, decisions } => {
            let config = build_config(&common, &["taxonomy"])?;
            let mode = match &decisions {
                Some(path) => CurateMode::Batch(path),
                None => CurateMode::Interactive,
            };
            let outcome = cmd_curate(&config, mode)?;
            eprintln!(
                "curated: {} accepted, {} rejected, {} skipped -> {}",
                outcome.accepted,
                outcome.rejected,
                outcome.skipped,
                outcome.taxonomy_path.display()
            );
        }
        Command::Pairs {
            common,
            records,
            scheme,
            variant,
        } => {
            let config = build_config(&common, &[])?;
            let scheme = PairScheme::parse(&scheme).ok_or_else(|| {
                PipelineError::InvalidConfig(format!(
                    "unknown scheme {scheme:?}; expected single-vs-baseline, multi-vs-baseline, or single-vs-multi"
                ))
            })?;
            let outcome = cmd_pairs(&config, &records, scheme, variant.as_deref())?;
            eprintln!(
                "built {} pairs -> {}",
                outcome.pair_count,
                outcome.pairs_path.display()
            );
            for (category, count) in &outcome.unpaired {
                eprintln!("  {category}: {count} records left unpaired");
            }
        }
        Command::Eval {
            common,
            pairs,
            judgments,
        } => {
            let config = build_config(&common, &[])?;
            let outcome = cmd_eval(&config, &pairs, &judgments)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome.report).expect("report serializes")
            );
            eprintln!("report written to {}", outcome.report_path.display());
        }
        Command::Stats { common } => {
            let config = build_config(&common, &["corpus", "taxonomy", "entities"])?;
            let outcome = cmd_stats(&config)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome).expect("stats serialize")
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
