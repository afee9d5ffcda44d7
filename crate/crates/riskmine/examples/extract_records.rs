//! Full extraction over the bundled corpus: find keyword and entity
//! occurrences, pair each keyword with its nearest entity in either
//! direction, filter by token distance, and retrieve sentence spans.
//!
//! Run with:
//!   cargo run --example extract_records

use riskmine::embeddings::EmbeddingConfig;
use riskmine::pipeline::{cmd_extract, PipelineConfig};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("riskmine-example-extract");
    let mut config = PipelineConfig::new(
        fixture("corpus"),
        fixture("taxonomy.tsv"),
        fixture("entities.txt"),
        &out,
    );
    config.cutoff = 100;
    config.rng_seed = 7;
    config.embedding = EmbeddingConfig::default();

    let outcome = cmd_extract(&config)?;
    println!(
        "{} documents -> {} records ({} same-sentence, {} multi-sentence)\n",
        outcome.manifest.document_count,
        outcome.manifest.record_counts.total,
        outcome
            .manifest
            .record_counts
            .by_scope
            .get("same_sentence")
            .unwrap_or(&0),
        outcome
            .manifest
            .record_counts
            .by_scope
            .get("multi_sentence")
            .unwrap_or(&0),
    );

    for record in outcome.records.iter().take(8) {
        println!(
            "[{}] {} -> {} (distance {}, {:?}, sentences {}..={})",
            record.category,
            record.keyword,
            record.entity,
            record.distance,
            record.scope,
            record.sentence_span.0,
            record.sentence_span.1
        );
        println!("    span: {:?}", record.span_text);
        if let Some(baseline) = &record.baseline_text {
            println!("    baseline: {baseline:?}");
        }
    }

    let stats = &outcome.manifest.corpus_stats;
    println!(
        "\ncorpus stats: m={} keywords (mean {:.3} instances/doc), n={} entities (mean {:.3}), \
         ~{:.1} comparisons/doc",
        stats.m, stats.a, stats.n, stats.b, stats.comparisons_estimate
    );
    println!("\nfull output: {}", outcome.records_path.display());
    println!("manifest:    {}", outcome.manifest_path.display());
    Ok(())
}
