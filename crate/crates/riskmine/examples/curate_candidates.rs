//! Curation workflow: candidates become active or rejected, decisions are
//! logged, and rejected terms stay rejected across later expansion runs.
//!
//! Run with:
//!   cargo run --example curate_candidates

use riskmine::ingest::Ingestor;
use riskmine::taxonomy::{
    CurationDecision, ExpansionCandidates, Taxonomy, TermProposal, TermStatus,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ingestor = Ingestor::new();
    let seeds = Taxonomy::parse(
        "cybersecurity\thack\nlegal\tlawsuit\n",
        "<example>",
        &ingestor,
    )?;

    let proposal = |word: &str, source: &str, category: &str, score: f64| TermProposal {
        word: word.to_string(),
        score,
        source_term: source.to_string(),
        category: category.to_string(),
    };
    let candidates = ExpansionCandidates {
        proposals: vec![
            proposal("exploit", "hack", "cybersecurity", 0.81),
            proposal("hack,", "hack", "cybersecurity", 0.77), // punctuation variant
            proposal("countersuit", "lawsuit", "legal", 0.74),
            proposal("suit", "lawsuit", "legal", 0.69),
        ],
        skipped: vec![],
    };

    let merged = seeds.merge_expansion(&candidates, &ingestor);
    println!(
        "merge: {} added, {} dropped as variants/duplicates\n",
        merged.added,
        merged.dropped_variant + merged.dropped_existing + merged.dropped_no_letter
    );
    let taxonomy = merged.taxonomy;

    // An analyst accepts the precise terms and rejects the overly general one.
    let taxonomy = taxonomy.curate(
        "cybersecurity",
        "exploit",
        CurationDecision::Accept,
        &ingestor,
    )?;
    let taxonomy = taxonomy.curate("legal", "countersuit", CurationDecision::Accept, &ingestor)?;
    let taxonomy = taxonomy.curate("legal", "suit", CurationDecision::Reject, &ingestor)?;

    println!("=== After curation ===");
    for term in &taxonomy.terms {
        println!(
            "[{}] {:<14} {:<9} {}",
            term.category,
            term.term,
            term.provenance.to_string(),
            term.status
        );
    }

    // Seeds cannot be curated.
    let err = taxonomy
        .curate("cybersecurity", "hack", CurationDecision::Reject, &ingestor)
        .unwrap_err();
    println!("\ncurating a seed term fails: {err}");

    // Rejection is sticky: the same candidate offered again never comes back.
    let again = taxonomy.merge_expansion(
        &ExpansionCandidates {
            proposals: vec![proposal("suit", "lawsuit", "legal", 0.70)],
            skipped: vec![],
        },
        &ingestor,
    );
    let suit = again
        .taxonomy
        .terms
        .iter()
        .find(|t| t.term == "suit")
        .expect("still present");
    println!(
        "re-proposing a rejected term: added {} new terms, \"suit\" stays {}",
        again.added, suit.status
    );
    assert_eq!(suit.status, TermStatus::Rejected);

    let path = std::env::temp_dir().join("riskmine-example-taxonomy.tsv");
    again.taxonomy.save(&path)?;
    println!("\ntaxonomy written to {}", path.display());
    Ok(())
}
