//! End-to-end runs of the `riskmine` binary over the bundled fixtures,
//! checking outputs, exit codes (0 success, 1 usage, 2 data), and the
//! extract → train → expand → curate → pairs → eval flow.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture;

fn riskmine(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riskmine"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn full_pipeline_flow() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out_str = out.to_str().unwrap();
    let corpus = fixture("corpus");
    let taxonomy = fixture("taxonomy.tsv");
    let entities = fixture("entities.txt");

    // extract
    let output = riskmine(
        &[
            "extract",
            "--corpus",
            &corpus,
            "--taxonomy",
            &taxonomy,
            "--entities",
            &entities,
            "--seed",
            "7",
            "--jobs",
            "2",
            "--out",
            out_str,
        ],
        dir.path(),
    );
    assert_exit(&output, 0);
    assert!(out.join("extractions.jsonl").exists());
    assert!(out.join("manifest.json").exists());
    let records = std::fs::read_to_string(out.join("extractions.jsonl")).unwrap();
    assert!(
        records.lines().count() > 5,
        "expected extractions from the fixture corpus"
    );
    assert!(records.contains("\"pipe bomb\""));
    assert!(records.contains("\"Time Warner\""));

    // train (tiny settings for the fixture corpus)
    let output = riskmine(
        &[
            "train",
            "--corpus",
            &corpus,
            "--taxonomy",
            &taxonomy,
            "--seed",
            "7",
            "--out",
            out_str,
            "--deterministic",
            "--dim",
            "16",
            "--window",
            "3",
            "--negatives",
            "2",
            "--min-count",
            "1",
            "--buckets",
            "1024",
            "--epochs",
            "2",
        ],
        dir.path(),
    );
    assert_exit(&output, 0);
    assert!(out.join("vectors.vec").exists());
    assert!(out.join("vectors.vec.meta.json").exists());

    // expand
    let output = riskmine(
        &[
            "expand",
            "--taxonomy",
            &taxonomy,
            "--top-k",
            "5",
            "--out",
            out_str,
        ],
        dir.path(),
    );
    assert_exit(&output, 0);
    let expanded_path = out.join("taxonomy_expanded.tsv");
    assert!(expanded_path.exists());
    assert!(out.join("candidates.jsonl").exists());
    assert!(out.join("expansion_report.json").exists());
    let expanded = std::fs::read_to_string(&expanded_path).unwrap();
    assert!(
        expanded.contains("\tcandidate"),
        "expansion should add candidates"
    );

    // curate (batch): reject the first candidate row.
    let candidate_line = expanded
        .lines()
        .find(|l| l.ends_with("\tcandidate"))
        .expect("candidate row");
    let mut fields = candidate_line.split('\t');
    let (category, term) = (fields.next().unwrap(), fields.next().unwrap());
    let decisions = dir.path().join("decisions.tsv");
    std::fs::write(&decisions, format!("{term}\t{category}\treject\n")).unwrap();
    let output = riskmine(
        &[
            "curate",
            "--taxonomy",
            expanded_path.to_str().unwrap(),
            "--decisions",
            decisions.to_str().unwrap(),
            "--out",
            out_str,
        ],
        dir.path(),
    );
    assert_exit(&output, 0);
    let curated = std::fs::read_to_string(out.join("taxonomy_curated.tsv")).unwrap();
    assert!(curated.contains(&format!("{category}\t{term}\texpanded\trejected")));
    assert!(out.join("curation_decisions.log").exists());

    // pairs
    let records_path = out.join("extractions.jsonl");
    let output = riskmine(
        &[
            "pairs",
            "--records",
            records_path.to_str().unwrap(),
            "--scheme",
            "single-vs-baseline",
            "--variant",
            "seed",
            "--seed",
            "7",
            "--out",
            out_str,
        ],
        dir.path(),
    );
    assert_exit(&output, 0);
    let pairs_path = out.join("pairs_single-vs-baseline.jsonl");
    assert!(pairs_path.exists());

    // eval with synthetic judgments over those pairs
    let pairs_content = std::fs::read_to_string(&pairs_path).unwrap();
    let mut judgments = String::from("pair_id,annotator_id,choice\n");
    for (i, line) in pairs_content.lines().enumerate() {
        let pair: serde_json::Value = serde_json::from_str(line).unwrap();
        let id = pair["pair_id"].as_str().unwrap();
        let choice = if i % 3 == 0 { "NEITHER" } else { "A" };
        judgments.push_str(&format!("{id},annotator-1,{choice}\n"));
        judgments.push_str(&format!("{id},annotator-2,B\n"));
    }
    let judgments_path = dir.path().join("judgments.csv");
    std::fs::write(&judgments_path, judgments).unwrap();
    let output = riskmine(
        &[
            "eval",
            "--pairs",
            pairs_path.to_str().unwrap(),
            "--judgments",
            judgments_path.to_str().unwrap(),
            "--out",
            out_str,
        ],
        dir.path(),
    );
    assert_exit(&output, 0);
    assert!(out.join("eval_report.json").exists());
    let report: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("eval prints the report as JSON");
    assert!(!report["comparisons"].as_array().unwrap().is_empty());
    assert!(report["doubly_annotated_pairs"].as_u64().unwrap() > 0);

    // stats
    let output = riskmine(
        &[
            "stats",
            "--corpus",
            &corpus,
            "--taxonomy",
            &taxonomy,
            "--entities",
            &entities,
        ],
        dir.path(),
    );
    assert_exit(&output, 0);
    let stats: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(stats["document_count"], 10);
    assert_eq!(stats["corpus_stats"]["m"], 101);
    assert_eq!(stats["corpus_stats"]["n"], 100);
}

#[test]
fn interactive_curation_reads_decisions_from_stdin() {
    use std::io::Write;
    use std::process::Stdio;

    let dir = tempfile::tempdir().unwrap();
    let taxonomy = dir.path().join("expanded.tsv");
    std::fs::write(
        &taxonomy,
        "legal\tlawsuit\tseed\tactive\n\
         legal\tcountersuit\texpanded\tcandidate\n\
         legal\tappeal\texpanded\tcandidate\n",
    )
    .unwrap();
    let out = dir.path().join("out");

    let mut child = Command::new(env!("CARGO_BIN_EXE_riskmine"))
        .args([
            "curate",
            "--taxonomy",
            taxonomy.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    // Accept the first candidate, reject the second.
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"a\nr\n")
        .expect("stdin writes");
    let output = child.wait_with_output().expect("binary finishes");
    assert_exit(&output, 0);

    let curated = std::fs::read_to_string(out.join("taxonomy_curated.tsv")).unwrap();
    assert!(curated.contains("legal\tcountersuit\texpanded\tactive"));
    assert!(curated.contains("legal\tappeal\texpanded\trejected"));
    let log = std::fs::read_to_string(out.join("curation_decisions.log")).unwrap();
    assert_eq!(log.lines().count(), 2);
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // Missing required --corpus.
    let output = riskmine(
        &[
            "extract",
            "--taxonomy",
            &fixture("taxonomy.tsv"),
            "--entities",
            &fixture("entities.txt"),
        ],
        dir.path(),
    );
    assert_exit(&output, 1);

    // Unknown pairing scheme.
    let output = riskmine(
        &["pairs", "--records", "whatever.jsonl", "--scheme", "bogus"],
        dir.path(),
    );
    assert_exit(&output, 1);

    // Nonexistent corpus path.
    let output = riskmine(
        &[
            "extract",
            "--corpus",
            "no-such-dir",
            "--taxonomy",
            &fixture("taxonomy.tsv"),
            "--entities",
            &fixture("entities.txt"),
        ],
        dir.path(),
    );
    assert_exit(&output, 1);

    // Unknown flag is a clap usage error.
    let output = riskmine(&["extract", "--bogus-flag"], dir.path());
    assert_exit(&output, 1);

    // Help exits 0.
    let output = riskmine(&["--help"], dir.path());
    assert_exit(&output, 0);
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_taxonomy = dir.path().join("bad.tsv");
    std::fs::write(&bad_taxonomy, "no-tabs-in-this-row\n").unwrap();
    let output = riskmine(
        &[
            "extract",
            "--corpus",
            &fixture("corpus"),
            "--taxonomy",
            bad_taxonomy.to_str().unwrap(),
            "--entities",
            &fixture("entities.txt"),
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_exit(&output, 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains(":1:"),
        "error should carry a line number: {stderr}"
    );

    // Malformed judgments CSV.
    let pairs = dir.path().join("pairs.jsonl");
    std::fs::write(
        &pairs,
        "{\"pair_id\":\"p\",\"category\":\"c\",\"side_a\":{\"label\":\"x\",\"text\":\"t\"},\"side_b\":{\"label\":\"y\",\"text\":\"u\"}}\n",
    )
    .unwrap();
    let judgments = dir.path().join("bad.csv");
    std::fs::write(&judgments, "p,annotator,MAYBE\n").unwrap();
    let output = riskmine(
        &[
            "eval",
            "--pairs",
            pairs.to_str().unwrap(),
            "--judgments",
            judgments.to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_exit(&output, 2);
}
