//! Evaluation round trip: extract records, build randomized A/B pairs,
//! simulate analyst judgments, and compute preference rates, Pearson's χ²
//! (d.f.=1), and Cohen's κ.
//!
//! Run with:
//!   cargo run --example evaluate_preferences

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riskmine::evalkit::{build_pairs, evaluation_report, Choice, JudgmentRecord, PairScheme};
use riskmine::pipeline::{cmd_extract, PipelineConfig};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("riskmine-example-eval");
    let config = PipelineConfig::new(
        fixture("corpus"),
        fixture("taxonomy.tsv"),
        fixture("entities.txt"),
        &out,
    );
    let records = cmd_extract(&config)?.records;

    let build = build_pairs(&records, PairScheme::SingleVsBaseline, 7, Some("seed"))?;
    println!("built {} single-vs-baseline pairs", build.pairs.len());
    for (category, count) in &build.unpaired {
        println!("  {category}: {count} records unpaired");
    }

    // Two simulated annotators who favour extraction spans over random
    // baselines, with some Neither judgments and occasional disagreement.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut judgments = Vec::new();
    for pair in &build.pairs {
        for annotator in ["analyst-1", "analyst-2"] {
            let single_side = if pair.side_a.label.starts_with("single") {
                Choice::A
            } else {
                Choice::B
            };
            let roll: f64 = rng.gen();
            let choice = if roll < 0.25 {
                Choice::Neither
            } else if roll < 0.85 {
                single_side
            } else if single_side == Choice::A {
                Choice::B
            } else {
                Choice::A
            };
            judgments.push(JudgmentRecord {
                pair_id: pair.pair_id.clone(),
                annotator_id: annotator.to_string(),
                choice,
            });
        }
    }

    let report = evaluation_report(&build.pairs, &judgments)?;
    println!(
        "\n{} judgments, preference rate {:.1}% (non-Neither share)",
        report.preference.total,
        report.preference.preference_rate * 100.0
    );
    for (label, count) in &report.preference.label_counts {
        println!("  {label:<14} {count}");
    }
    println!("  {:<14} {}", "neither", report.preference.neither);

    println!("\n=== Pairings (χ², d.f.=1) ===");
    for comparison in &report.comparisons {
        println!(
            "{} vs {}: counts {} / {} (neither {}), chi2 = {:.3}, p = {:.3e}",
            comparison.label_x,
            comparison.label_y,
            comparison.count_x,
            comparison.count_y,
            comparison.neither,
            comparison.chi2,
            comparison.p
        );
    }

    println!("\n=== Agreement ===");
    println!("doubly annotated pairs: {}", report.doubly_annotated_pairs);
    for (category, kappa) in &report.kappa_by_category {
        match kappa {
            Some(value) => println!("  {category:<14} kappa = {value:.3}"),
            None => println!("  {category:<14} kappa unavailable (no double annotations)"),
        }
    }
    Ok(())
}
