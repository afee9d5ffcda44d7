//! Train subword skipgram vectors on a synthetic corpus and query them:
//! similarity, nearest neighbours, and out-of-vocabulary composition from
//! character n-grams.
//!
//! Run with:
//!   cargo run --release --example train_vectors

use riskmine::embeddings::{train_skipgram, EmbeddingConfig, TrainMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A corpus with two topic clusters so the geometry is visible: breaches
    // pattern with networks, lawsuits with courts.
    let mut sentences: Vec<Vec<String>> = Vec::new();
    for _ in 0..300 {
        sentences.push(tokens("the breach hit the network last night"));
        sentences.push(tokens("another breach crippled the network today"));
        sentences.push(tokens("the lawsuit reached the court last week"));
        sentences.push(tokens("a second lawsuit reached the court quickly"));
    }

    let config = EmbeddingConfig {
        dim: 32,
        window: 3,
        negatives: 5,
        min_count: 2,
        ngram_min: 3,
        ngram_max: 5,
        bucket_count: 10_000,
        epochs: 8,
        learning_rate: 0.05,
        rng_seed: 11,
    };
    let (model, report) = train_skipgram(&sentences, &config, TrainMode::Deterministic)?;

    println!(
        "vocab {} words, {} positive pairs/epoch",
        model.vocab.len(),
        report.positive_pairs_per_epoch
    );
    println!("epoch mean loss: {:?}\n", report.epoch_mean_loss);

    for (a, b) in [
        ("breach", "network"),
        ("breach", "court"),
        ("lawsuit", "court"),
    ] {
        println!(
            "similarity({a:>8}, {b:>8}) = {:+.4}",
            model.similarity(a, b)?
        );
    }

    println!("\ntop-3 neighbours of \"breach\":");
    for (word, score) in model.top_k_similar("breach", 3)? {
        println!("  {word:<10} {score:+.4}");
    }

    // An out-of-vocabulary misspelling still composes a vector from its
    // character n-grams and lands near the word it resembles.
    let misspelled = "breachh";
    println!("\nout-of-vocabulary {misspelled:?}:");
    for target in ["breach", "court"] {
        println!(
            "  similarity to {target:<8} = {:+.4}",
            model.similarity(misspelled, target)?
        );
    }

    let path = std::env::temp_dir().join("riskmine-example-vectors.vec");
    model.to_word_vectors().save(&path)?;
    println!("\nvectors written to {}", path.display());
    Ok(())
}

fn tokens(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}
