//! Expand a seed taxonomy with embedding neighbours: train on a corpus where
//! candidate terms share contexts with seeds, take the top-k most similar
//! vocabulary words per in-vocabulary seed, and merge them through the
//! cleanup filters as curation candidates.
//!
//! Run with:
//!   cargo run --release --example expand_taxonomy

use riskmine::embeddings::{train_skipgram, EmbeddingConfig, TrainMode};
use riskmine::ingest::Ingestor;
use riskmine::pipeline::training_sentences;
use riskmine::taxonomy::{expansion_report, Taxonomy, TermStatus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ingestor = Ingestor::new();
    let taxonomy = Taxonomy::parse(
        "cybersecurity\thack\ncybersecurity\tdata breach\nlegal\tlawsuit\n",
        "<example>",
        &ingestor,
    )?;

    // Synthetic articles where "exploit"/"intrusion" pattern like "hack",
    // and "countersuit" like "lawsuit". Multi-word seeds are phrase-joined
    // before training so "data breach" is a single vocabulary entry.
    let mut raw_sentences = Vec::new();
    for _ in 0..200 {
        raw_sentences.push("the hack disabled the payment system overnight.");
        raw_sentences.push("the exploit disabled the payment system overnight.");
        raw_sentences.push("an intrusion disabled the billing system overnight.");
        raw_sentences.push("a data breach exposed the customer database records.");
        raw_sentences.push("the lawsuit named the supplier in court filings.");
        raw_sentences.push("a countersuit named the distributor in court filings.");
    }
    let docs: Vec<_> = raw_sentences
        .iter()
        .enumerate()
        .map(|(i, text)| {
            ingestor
                .ingest(&riskmine::ingest::RawDocument::new(format!("d{i}"), *text))
                .expect("ingests")
        })
        .collect();
    let sentences = training_sentences(&docs, &taxonomy);

    let config = EmbeddingConfig {
        dim: 32,
        window: 4,
        negatives: 5,
        min_count: 3,
        ngram_min: 3,
        ngram_max: 5,
        bucket_count: 10_000,
        epochs: 6,
        learning_rate: 0.05,
        rng_seed: 17,
    };
    let (model, _) = train_skipgram(&sentences, &config, TrainMode::Deterministic)?;

    let candidates = model.expand_taxonomy(&taxonomy, 4);
    println!("=== Proposals ===");
    for proposal in &candidates.proposals {
        println!(
            "[{}] {:<16} {:+.4}  (from seed {:?})",
            proposal.category, proposal.word, proposal.score, proposal.source_term
        );
    }
    if !candidates.skipped.is_empty() {
        println!("\n=== Skipped seeds ===");
        for skip in &candidates.skipped {
            println!("[{}] {:<16} {}", skip.category, skip.term, skip.reason);
        }
    }

    let outcome = taxonomy.merge_expansion(&candidates, &ingestor);
    println!(
        "\nmerged: {} added, {} already present, {} punctuation variants, {} without letters",
        outcome.added, outcome.dropped_existing, outcome.dropped_variant, outcome.dropped_no_letter
    );
    println!("\n=== Candidates awaiting curation ===");
    for term in outcome
        .taxonomy
        .terms
        .iter()
        .filter(|t| t.status == TermStatus::Candidate)
    {
        println!("[{}] {}", term.category, term.term);
    }

    let report = expansion_report(&taxonomy, &outcome.taxonomy)?;
    println!("\n=== Growth ===");
    for (category, increase) in &report.per_category {
        println!(
            "{category}: {} -> {} (+{:.1}%)",
            increase.before, increase.after, increase.percent_increase
        );
    }
    println!("average: +{:.1}%", report.average_percent_increase);
    Ok(())
}
