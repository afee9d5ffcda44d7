//! Tokenize, lemmatize, and sentence-split a document, then load a corpus
//! directory.
//!
//! Run with:
//!   cargo run --example ingest_corpus

use riskmine::ingest::{read_corpus_dir, Ingestor, RawDocument};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ingestor = Ingestor::new();

    let raw = RawDocument::new(
        "demo",
        "Later Wednesday, CNN received a pipe bomb at its U.S. headquarters. \
         Mr. Smith said the lawsuits were settled.",
    );
    let doc = ingestor.ingest(&raw)?;

    println!("=== Tokens ===");
    for token in &doc.tokens {
        println!(
            "{:>3}  {:<14} lemma={:<12} [{}, {})",
            token.token_index, token.surface, token.lemma, token.char_start, token.char_end
        );
    }

    println!("\n=== Sentences ===");
    for (i, &(start, end)) in doc.sentences.iter().enumerate() {
        let first = &doc.tokens[start];
        let last = &doc.tokens[end - 1];
        println!(
            "{}: tokens [{start}, {end})  text: {:?}",
            i,
            &doc.text[first.char_start..last.char_end]
        );
    }

    // Note "U.S." and "Mr." did not end sentences, "pipe" and "bomb" are
    // separate tokens, and "lawsuits"/"settled" lemmatized to their base
    // forms.

    let corpus_dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/corpus");
    let docs = read_corpus_dir(corpus_dir)?;
    println!("\n=== Corpus ===");
    for raw in &docs {
        let doc = ingestor.ingest(raw)?;
        println!(
            "{:<28} {:>4} tokens {:>2} sentences",
            doc.doc_id,
            doc.tokens.len(),
            doc.sentences.len()
        );
    }
    Ok(())
}
