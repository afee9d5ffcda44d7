//! riskmine — entity-risk relation extraction over text corpora.
//!
//! Given a categorized risk-keyword taxonomy and an entity list, the library
//! tokenizes/lemmatizes/sentencizes documents, pairs every keyword occurrence
//! with its nearest entity occurrence in either direction, filters pairs by
//! intervening-token distance, classifies them by sentence scope, and
//! retrieves the covering sentence span for analyst review. Subword skipgram
//! embeddings trained on the same corpus propose taxonomy expansion
//! candidates, and an evaluation kit builds pairwise preference bundles and
//! computes Pearson's χ² (d.f.=1) and Cohen's κ over analyst judgments.
//!
//! ## Modules
//!
//! - [`ingest`] — tokenizer, lemmatizer, sentencizer, corpus readers.
//! - [`taxonomy`] — keyword taxonomy and entity list: loading, normalization,
//!   expansion merging, curation.
//! - [`matcher`] — occurrence detection, bidirectional nearest pairing,
//!   distance cutoff, scope classification, span retrieval.
//! - [`embeddings`] — skipgram-negative-sampling word vectors with character
//!   n-gram subwords; similarity queries and top-k expansion proposals.
//! - [`evalkit`] — baseline sampling, pairwise evaluation bundles, preference
//!   summaries, χ² and κ statistics.
//! - [`pipeline`] — end-to-end commands with reproducible configuration and
//!   parallel document fan-out (these back the `riskmine` binary).
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example ingest_corpus
//! cargo run --release --example extract_records
//! cargo run --release --example train_vectors
//! cargo run --release --example expand_taxonomy
//! cargo run --release --example curate_candidates
//! cargo run --release --example evaluate_preferences
//! ```

pub mod embeddings;
pub mod evalkit;
pub mod ingest;
pub mod matcher;
pub mod pipeline;
pub mod taxonomy;
pub mod util;
