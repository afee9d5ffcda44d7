//! Categorized risk-keyword taxonomy and entity list: loading, normalization,
//! expansion merging, curation, and persistence.
//!
//! Terms are stored with their lemma token sequences and matched as contiguous
//! token runs. Expansion never touches seed terms: embedding-proposed
//! candidates enter with `status = candidate` and only an explicit curation
//! decision activates or rejects them. Rejected terms stay in the taxonomy so
//! later expansion runs cannot resurrect them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Ingestor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Seed,
    Expanded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermStatus {
    Active,
    Candidate,
    Rejected,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Seed => "seed",
            Provenance::Expanded => "expanded",
        })
    }
}

impl fmt::Display for TermStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermStatus::Active => "active",
            TermStatus::Candidate => "candidate",
            TermStatus::Rejected => "rejected",
        })
    }
}

/// One taxonomy row: a (possibly multi-word) term in a risk category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyTerm {
    pub term: String,
    pub category: String,
    pub provenance: Provenance,
    pub status: TermStatus,
    pub lemma_tokens: Vec<String>,
}

impl TaxonomyTerm {
    /// Key used for uniqueness and matching: lemmas joined by a single space.
    pub fn lemma_key(&self) -> String {
        self.lemma_tokens.join(" ")
    }
}

/// The keyword taxonomy: an ordered term list plus its category set.
///
/// Immutable value type; curation and merging return new versions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Taxonomy {
    pub terms: Vec<TaxonomyTerm>,
    pub categories: BTreeSet<String>,
}

/// A single entity with its alias match forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub canonical: String,
    /// Every surface form that counts as a mention, canonical name included.
    pub aliases: Vec<String>,
    /// Lemma token sequence per alias, parallel to `aliases`.
    pub alias_lemmas: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityList {
    pub entities: Vec<Entity>,
}

/// One embedding-proposed expansion candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermProposal {
    /// Vocabulary word proposed (underscores mark joined multi-word phrases).
    pub word: String,
    pub score: f64,
    pub source_term: String,
    pub category: String,
}

/// A seed term that could not be expanded, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedSeed {
    pub term: String,
    pub category: String,
    pub reason: String,
}

/// Output of taxonomy expansion: per-term proposals (flattened, in seed-term
/// order) plus the skip report for out-of-vocabulary seeds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCandidates {
    pub proposals: Vec<TermProposal>,
    pub skipped: Vec<SkippedSeed>,
}

/// Result of merging expansion candidates into a taxonomy.
#[derive(Debug, Clone)]
pub struct MergeOutcome {
    pub taxonomy: Taxonomy,
    pub added: usize,
    pub dropped_no_letter: usize,
    pub dropped_existing: usize,
    pub dropped_variant: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurationDecision {
    Accept,
    Reject,
}

impl fmt::Display for CurationDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurationDecision::Accept => "accept",
            CurationDecision::Reject => "reject",
        })
    }
}

#[derive(Debug, Error)]
pub enum TaxonomyError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("taxonomy has no active terms")]
    EmptyTaxonomy,
    #[error("entity list is empty")]
    EmptyEntityList,
    #[error("unknown term {term:?} in category {category:?}")]
    UnknownTerm { term: String, category: String },
    #[error("term {term:?} in category {category:?} is not a candidate")]
    NotACandidate { term: String, category: String },
    #[error("category {0:?} has zero terms before expansion")]
    DivisionByZero(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Per-category before/after counts and percent increase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryIncrease {
    pub before: usize,
    pub after: usize,
    pub percent_increase: f64,
}

/// Expansion report: per-category increases plus their arithmetic mean.
///
/// Counts cover active and candidate terms; rejected terms are excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub per_category: BTreeMap<String, CategoryIncrease>,
    pub average_percent_increase: f64,
}

impl Taxonomy {
    pub fn new() -> Self {
        Taxonomy {
            terms: Vec::new(),
            categories: BTreeSet::new(),
        }
    }

    /// Load and normalize a taxonomy TSV.
    ///
    /// Row format: `category<TAB>term[<TAB>provenance[<TAB>status]]` with
    /// `seed`/`active` as defaults; `#` starts a comment. Rows collapsing to
    /// the same `(category, lemma_tokens)` merge into one term, keeping seed
    /// provenance if any duplicate is seed and the stickiest status
    /// (rejected > active > candidate) otherwise.
    pub fn load(path: impl AsRef<Path>, ingestor: &Ingestor) -> Result<Self, TaxonomyError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|source| TaxonomyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Taxonomy::parse(&content, &path.display().to_string(), ingestor)
    }

    pub fn parse(content: &str, origin: &str, ingestor: &Ingestor) -> Result<Self, TaxonomyError> {
        let mut taxonomy = Taxonomy::new();
        let mut index: HashMap<(String, String), usize> = HashMap::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 2 || fields.len() > 4 {
                return Err(TaxonomyError::Parse {
                    path: origin.to_string(),
                    line: lineno + 1,
                    message: format!("expected 2-4 tab-separated fields, got {}", fields.len()),
                });
            }
            let category = fields[0].trim().to_string();
            let term = fields[1].trim().to_string();
            if category.is_empty() || term.is_empty() {
                return Err(TaxonomyError::Parse {
                    path: origin.to_string(),
                    line: lineno + 1,
                    message: "category and term must be non-empty".to_string(),
                });
            }
            let provenance = match fields.get(2).map(|s| s.trim()) {
                None | Some("seed") => Provenance::Seed,
                Some("expanded") => Provenance::Expanded,
                Some(other) => {
                    return Err(TaxonomyError::Parse {
                        path: origin.to_string(),
                        line: lineno + 1,
                        message: format!("unknown provenance {other:?}"),
                    })
                }
            };
            let status = match fields.get(3).map(|s| s.trim()) {
                None | Some("active") => TermStatus::Active,
                Some("candidate") => TermStatus::Candidate,
                Some("rejected") => TermStatus::Rejected,
                Some(other) => {
                    return Err(TaxonomyError::Parse {
                        path: origin.to_string(),
                        line: lineno + 1,
                        message: format!("unknown status {other:?}"),
                    })
                }
            };
            let lemma_tokens = ingestor.lemma_tokens(&term);
            if lemma_tokens.is_empty() {
                return Err(TaxonomyError::Parse {
                    path: origin.to_string(),
                    line: lineno + 1,
                    message: format!("term {term:?} normalizes to zero tokens"),
                });
            }
            let new_term = TaxonomyTerm {
                term,
                category: category.clone(),
                provenance,
                status,
                lemma_tokens,
            };
            let key = (category.clone(), new_term.lemma_key());
            match index.get(&key) {
                Some(&i) => {
                    let existing = &mut taxonomy.terms[i];
                    if new_term.provenance == Provenance::Seed {
                        existing.provenance = Provenance::Seed;
                    }
                    existing.status = stickier(existing.status, new_term.status);
                }
                None => {
                    index.insert(key, taxonomy.terms.len());
                    taxonomy.terms.push(new_term);
                }
            }
            taxonomy.categories.insert(category);
        }
        if !taxonomy
            .terms
            .iter()
            .any(|t| t.status == TermStatus::Active)
        {
            return Err(TaxonomyError::EmptyTaxonomy);
        }
        Ok(taxonomy)
    }

    /// Write the normalized TSV representation, sorted by (category, term).
    /// `load(save(t))` reproduces `t` up to that ordering.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TaxonomyError> {
        let path = path.as_ref();
        let mut rows: Vec<&TaxonomyTerm> = self.terms.iter().collect();
        rows.sort_by(|a, b| (&a.category, &a.term).cmp(&(&b.category, &b.term)));
        let mut out = String::from("# category\tterm\tprovenance\tstatus\n");
        for t in rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                t.category, t.term, t.provenance, t.status
            ));
        }
        std::fs::write(path, out).map_err(|source| TaxonomyError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn find(&self, category: &str, lemma_key: &str) -> Option<&TaxonomyTerm> {
        self.terms
            .iter()
            .find(|t| t.category == category && t.lemma_key() == lemma_key)
    }

    /// Terms that participate in matching.
    pub fn active_terms(&self) -> impl Iterator<Item = &TaxonomyTerm> {
        self.terms.iter().filter(|t| t.status == TermStatus::Active)
    }

    /// Active + candidate count per category (the expansion-report counts).
    pub fn counts_by_category(&self) -> BTreeMap<String, usize> {
        let mut counts: BTreeMap<String, usize> =
            self.categories.iter().map(|c| (c.clone(), 0)).collect();
        for t in &self.terms {
            if t.status != TermStatus::Rejected {
                *counts.entry(t.category.clone()).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Merge expansion candidates, applying the cleanup filters: a candidate
    /// is dropped when it (a) contains no letter, (b) normalizes to an
    /// existing term's lemma tokens in the same category (rejected terms
    /// block re-entry), or (c) differs from an existing same-category term
    /// only by punctuation or whitespace. Survivors enter as
    /// `expanded`/`candidate` terms; seed terms are never modified.
    pub fn merge_expansion(
        &self,
        candidates: &ExpansionCandidates,
        ingestor: &Ingestor,
    ) -> MergeOutcome {
        let mut taxonomy = self.clone();
        let mut lemma_keys: HashMap<(String, String), ()> = HashMap::new();
        let mut squashed: HashMap<(String, String), ()> = HashMap::new();
        for t in &taxonomy.terms {
            lemma_keys.insert((t.category.clone(), t.lemma_key()), ());
            squashed.insert((t.category.clone(), squash(&t.lemma_tokens)), ());
        }

        let mut outcome = MergeOutcome {
            taxonomy: Taxonomy::new(),
            added: 0,
            dropped_no_letter: 0,
            dropped_existing: 0,
            dropped_variant: 0,
        };

        for proposal in &candidates.proposals {
            // Joined phrases come back from the vocabulary with underscores.
            let term_text = proposal.word.replace('_', " ");
            if !term_text.chars().any(|c| c.is_alphabetic()) {
                outcome.dropped_no_letter += 1;
                continue;
            }
            let lemma_tokens = ingestor.lemma_tokens(&term_text);
            if lemma_tokens.is_empty() {
                outcome.dropped_no_letter += 1;
                continue;
            }
            let category = proposal.category.clone();
            let lemma_key = (category.clone(), lemma_tokens.join(" "));
            if lemma_keys.contains_key(&lemma_key) {
                outcome.dropped_existing += 1;
                continue;
            }
            let squash_key = (category.clone(), squash(&lemma_tokens));
            if squashed.contains_key(&squash_key) {
                outcome.dropped_variant += 1;
                continue;
            }
            lemma_keys.insert(lemma_key, ());
            squashed.insert(squash_key, ());
            taxonomy.categories.insert(category.clone());
            taxonomy.terms.push(TaxonomyTerm {
                term: term_text,
                category,
                provenance: Provenance::Expanded,
                status: TermStatus::Candidate,
                lemma_tokens,
            });
            outcome.added += 1;
        }

        outcome.taxonomy = taxonomy;
        outcome
    }

    /// Accept or reject a candidate term, returning the updated taxonomy.
    pub fn curate(
        &self,
        category: &str,
        term: &str,
        decision: CurationDecision,
        ingestor: &Ingestor,
    ) -> Result<Taxonomy, TaxonomyError> {
        let lemma_key = ingestor.lemma_tokens(term).join(" ");
        let position = self
            .terms
            .iter()
            .position(|t| t.category == category && t.lemma_key() == lemma_key)
            .ok_or_else(|| TaxonomyError::UnknownTerm {
                term: term.to_string(),
                category: category.to_string(),
            })?;
        if self.terms[position].status != TermStatus::Candidate {
            return Err(TaxonomyError::NotACandidate {
                term: term.to_string(),
                category: category.to_string(),
            });
        }
        let mut taxonomy = self.clone();
        taxonomy.terms[position].status = match decision {
            CurationDecision::Accept => TermStatus::Active,
            CurationDecision::Reject => TermStatus::Rejected,
        };
        Ok(taxonomy)
    }
}

impl Default for Taxonomy {
    fn default() -> Self {
        Taxonomy::new()
    }
}

fn stickier(a: TermStatus, b: TermStatus) -> TermStatus {
    use TermStatus::*;
    match (a, b) {
        (Rejected, _) | (_, Rejected) => Rejected,
        (Active, _) | (_, Active) => Active,
        _ => Candidate,
    }
}

/// Lemmas joined and stripped of everything but letters and digits; two terms
/// with equal squashes differ only by punctuation/whitespace.
fn squash(lemma_tokens: &[String]) -> String {
    lemma_tokens
        .iter()
        .flat_map(|t| t.chars())
        .filter(|c| c.is_alphanumeric())
        .collect()
}

/// Percent increase per category and the mean across categories.
pub fn expansion_report(
    before: &Taxonomy,
    after: &Taxonomy,
) -> Result<ExpansionReport, TaxonomyError> {
    let before_counts = before.counts_by_category();
    let after_counts = after.counts_by_category();
    let mut per_category = BTreeMap::new();
    for (category, &after_count) in &after_counts {
        let &before_count = before_counts
            .get(category)
            .ok_or_else(|| TaxonomyError::DivisionByZero(category.clone()))?;
        if before_count == 0 {
            return Err(TaxonomyError::DivisionByZero(category.clone()));
        }
        let percent_increase =
            100.0 * (after_count as f64 - before_count as f64) / before_count as f64;
        per_category.insert(
            category.clone(),
            CategoryIncrease {
                before: before_count,
                after: after_count,
                percent_increase,
            },
        );
    }
    let average_percent_increase = if per_category.is_empty() {
        0.0
    } else {
        per_category
            .values()
            .map(|c| c.percent_increase)
            .sum::<f64>()
            / per_category.len() as f64
    };
    Ok(ExpansionReport {
        per_category,
        average_percent_increase,
    })
}

impl EntityList {
    /// Load entities: one per line, aliases separated by `|`, the first field
    /// being the canonical name (which also counts as an alias). `#` starts a
    /// comment. Canonical names must be unique and no normalized alias may
    /// map to two canonical names.
    pub fn load(path: impl AsRef<Path>, ingestor: &Ingestor) -> Result<Self, TaxonomyError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|source| TaxonomyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        EntityList::parse(&content, &path.display().to_string(), ingestor)
    }

    pub fn parse(content: &str, origin: &str, ingestor: &Ingestor) -> Result<Self, TaxonomyError> {
        let mut entities: Vec<Entity> = Vec::new();
        let mut canonical_seen: HashMap<String, usize> = HashMap::new();
        let mut alias_owner: HashMap<String, String> = HashMap::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| TaxonomyError::Parse {
                path: origin.to_string(),
                line: lineno + 1,
                message,
            };
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            if fields.iter().any(|f| f.is_empty()) {
                return Err(parse_err("empty entity or alias field".to_string()));
            }
            let canonical = fields[0].to_string();
            if canonical_seen.contains_key(&canonical) {
                return Err(parse_err(format!("duplicate canonical name {canonical:?}")));
            }
            let mut aliases = Vec::new();
            let mut alias_lemmas = Vec::new();
            for alias in &fields {
                let lemmas = ingestor.lemma_tokens(alias);
                if lemmas.is_empty() {
                    return Err(parse_err(format!(
                        "alias {alias:?} normalizes to zero tokens"
                    )));
                }
                let key = lemmas.join(" ");
                match alias_owner.get(&key) {
                    Some(owner) if *owner != canonical => {
                        return Err(parse_err(format!(
                            "alias {alias:?} already maps to {owner:?}"
                        )));
                    }
                    Some(_) => continue, // duplicate alias of the same entity
                    None => {
                        alias_owner.insert(key, canonical.clone());
                    }
                }
                aliases.push(alias.to_string());
                alias_lemmas.push(lemmas);
            }
            canonical_seen.insert(canonical.clone(), entities.len());
            entities.push(Entity {
                canonical,
                aliases,
                alias_lemmas,
            });
        }
        if entities.is_empty() {
            return Err(TaxonomyError::EmptyEntityList);
        }
        Ok(EntityList { entities })
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }
}

/// Append one curation decision to the audit log
/// (`term<TAB>category<TAB>decision<TAB>unix_timestamp`).
pub fn append_decision_log(
    path: impl AsRef<Path>,
    term: &str,
    category: &str,
    decision: CurationDecision,
) -> Result<(), TaxonomyError> {
    let path = path.as_ref();
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|source| TaxonomyError::Io {
            path: path.display().to_string(),
            source,
        })?;
    writeln!(file, "{term}\t{category}\t{decision}\t{timestamp}").map_err(|source| {
        TaxonomyError::Io {
            path: path.display().to_string(),
            source,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ingestor() -> Ingestor {
        Ingestor::new()
    }

    fn seed_taxonomy(rows: &[(&str, &str)]) -> Taxonomy {
        let content: String = rows
            .iter()
            .map(|(cat, term)| format!("{cat}\t{term}\tseed\tactive\n"))
            .collect();
        Taxonomy::parse(&content, "<test>", &ingestor()).unwrap()
    }

    #[test]
    fn duplicate_lemmas_collapse_keeping_seed() {
        let content = "cybersecurity\thack\tseed\tactive\ncybersecurity\thacks\tseed\tactive\n";
        let tax = Taxonomy::parse(content, "<t>", &ingestor()).unwrap();
        assert_eq!(tax.terms.len(), 1);
        assert_eq!(tax.terms[0].provenance, Provenance::Seed);
        assert_eq!(tax.terms[0].lemma_tokens, ["hack"]);
    }

    #[test]
    fn empty_taxonomy_is_an_error() {
        assert!(matches!(
            Taxonomy::parse("", "<t>", &ingestor()),
            Err(TaxonomyError::EmptyTaxonomy)
        ));
        // Candidates alone do not count as active.
        assert!(matches!(
            Taxonomy::parse("c\tx\texpanded\tcandidate\n", "<t>", &ingestor()),
            Err(TaxonomyError::EmptyTaxonomy)
        ));
    }

    #[test]
    fn parse_error_carries_line_number() {
        let content = "cybersecurity\thack\n\nbadline-without-tab\n";
        match Taxonomy::parse(content, "<t>", &ingestor()) {
            Err(TaxonomyError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn multiword_terms_keep_lemma_sequences() {
        let tax = seed_taxonomy(&[("legal", "sanctions violations")]);
        assert_eq!(tax.terms[0].lemma_tokens, ["sanction", "violation"]);
    }

    #[test]
    fn merge_drops_punctuation_variants_and_duplicates() {
        let tax = seed_taxonomy(&[("cybersecurity", "hack")]);
        let candidates = ExpansionCandidates {
            proposals: vec![
                TermProposal {
                    word: "hack,".into(),
                    score: 0.9,
                    source_term: "hack".into(),
                    category: "cybersecurity".into(),
                },
                TermProposal {
                    word: "hacks".into(),
                    score: 0.8,
                    source_term: "hack".into(),
                    category: "cybersecurity".into(),
                },
                TermProposal {
                    word: "unauthenticated".into(),
                    score: 0.7,
                    source_term: "hack".into(),
                    category: "cybersecurity".into(),
                },
                TermProposal {
                    word: "123".into(),
                    score: 0.6,
                    source_term: "hack".into(),
                    category: "cybersecurity".into(),
                },
            ],
            skipped: vec![],
        };
        let outcome = tax.merge_expansion(&candidates, &ingestor());
        assert_eq!(outcome.added, 1);
        assert_eq!(outcome.dropped_variant, 1); // "hack,"
        assert_eq!(outcome.dropped_existing, 1); // "hacks" → "hack"
        assert_eq!(outcome.dropped_no_letter, 1); // "123"
        let added = outcome
            .taxonomy
            .terms
            .iter()
            .find(|t| t.term == "unauthenticated")
            .unwrap();
        assert_eq!(added.provenance, Provenance::Expanded);
        assert_eq!(added.status, TermStatus::Candidate);
        // Seeds untouched.
        assert_eq!(
            outcome
                .taxonomy
                .find("cybersecurity", "hack")
                .unwrap()
                .status,
            TermStatus::Active
        );
    }

    #[test]
    fn merge_respects_rejections() {
        let tax = seed_taxonomy(&[("legal", "lawsuit")]);
        let proposal = |word: &str| ExpansionCandidates {
            proposals: vec![TermProposal {
                word: word.into(),
                score: 0.5,
                source_term: "lawsuit".into(),
                category: "legal".into(),
            }],
            skipped: vec![],
        };
        let merged = tax
            .merge_expansion(&proposal("countersuit"), &ingestor())
            .taxonomy;
        let rejected = merged
            .curate(
                "legal",
                "countersuit",
                CurationDecision::Reject,
                &ingestor(),
            )
            .unwrap();
        let remerged = rejected.merge_expansion(&proposal("countersuit"), &ingestor());
        assert_eq!(remerged.added, 0);
        assert_eq!(remerged.dropped_existing, 1);
        assert_eq!(
            remerged
                .taxonomy
                .find("legal", "countersuit")
                .unwrap()
                .status,
            TermStatus::Rejected
        );
    }

    #[test]
    fn curate_accept_activates() {
        let tax = seed_taxonomy(&[("cybersecurity", "hack")]);
        let candidates = ExpansionCandidates {
            proposals: vec![TermProposal {
                word: "4front security".into(),
                score: 0.9,
                source_term: "hack".into(),
                category: "cybersecurity".into(),
            }],
            skipped: vec![],
        };
        let merged = tax.merge_expansion(&candidates, &ingestor()).taxonomy;
        let curated = merged
            .curate(
                "cybersecurity",
                "4front security",
                CurationDecision::Accept,
                &ingestor(),
            )
            .unwrap();
        assert_eq!(
            curated
                .find("cybersecurity", "4front security")
                .unwrap()
                .status,
            TermStatus::Active
        );
    }

    #[test]
    fn curate_rejects_non_candidates() {
        let tax = seed_taxonomy(&[("legal", "lawsuit")]);
        assert!(matches!(
            tax.curate("legal", "lawsuit", CurationDecision::Accept, &ingestor()),
            Err(TaxonomyError::NotACandidate { .. })
        ));
        assert!(matches!(
            tax.curate("legal", "nothere", CurationDecision::Accept, &ingestor()),
            Err(TaxonomyError::UnknownTerm { .. })
        ));
    }

    #[test]
    fn report_matches_published_counts() {
        // 26 → 123, 37 → 147, 38 → 162.
        let mut before = Taxonomy::new();
        let mut after = Taxonomy::new();
        for (category, seed, expanded) in [
            ("cybersecurity", 26usize, 123usize),
            ("terrorism", 37, 147),
            ("legal", 38, 162),
        ] {
            before.categories.insert(category.to_string());
            after.categories.insert(category.to_string());
            for i in 0..seed {
                let t = TaxonomyTerm {
                    term: format!("{category}-t{i}"),
                    category: category.to_string(),
                    provenance: Provenance::Seed,
                    status: TermStatus::Active,
                    lemma_tokens: vec![format!("{category}-t{i}")],
                };
                before.terms.push(t.clone());
                after.terms.push(t);
            }
            for i in 0..(expanded - seed) {
                after.terms.push(TaxonomyTerm {
                    term: format!("{category}-x{i}"),
                    category: category.to_string(),
                    provenance: Provenance::Expanded,
                    status: TermStatus::Candidate,
                    lemma_tokens: vec![format!("{category}-x{i}")],
                });
            }
        }
        let report = expansion_report(&before, &after).unwrap();
        let pct = |c: &str| report.per_category[c].percent_increase;
        assert!((pct("cybersecurity") - 373.1).abs() < 0.1);
        assert!((pct("terrorism") - 297.3).abs() < 0.1);
        assert!((pct("legal") - 326.3).abs() < 0.1);
        assert!((report.average_percent_increase - 332.2).abs() < 0.1);
    }

    #[test]
    fn report_unchanged_taxonomy_is_zero() {
        let tax = seed_taxonomy(&[("legal", "lawsuit"), ("terrorism", "bomb")]);
        let report = expansion_report(&tax, &tax).unwrap();
        assert!(report
            .per_category
            .values()
            .all(|c| c.percent_increase == 0.0));
        assert_eq!(report.average_percent_increase, 0.0);
    }

    #[test]
    fn report_zero_before_count_errors() {
        let before = seed_taxonomy(&[("legal", "lawsuit")]);
        let mut after = before.clone();
        after.categories.insert("new".to_string());
        after.terms.push(TaxonomyTerm {
            term: "thing".into(),
            category: "new".into(),
            provenance: Provenance::Expanded,
            status: TermStatus::Candidate,
            lemma_tokens: vec!["thing".into()],
        });
        assert!(matches!(
            expansion_report(&before, &after),
            Err(TaxonomyError::DivisionByZero(_))
        ));
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tax.tsv");
        let tax = seed_taxonomy(&[
            ("legal", "lawsuit"),
            ("legal", "failure to comply"),
            ("terrorism", "pipe bomb"),
        ]);
        tax.save(&path).unwrap();
        let reloaded = Taxonomy::load(&path, &ingestor()).unwrap();
        let key = |t: &Taxonomy| {
            let mut v: Vec<_> = t
                .terms
                .iter()
                .map(|t| (t.category.clone(), t.lemma_key(), t.provenance, t.status))
                .collect();
            v.sort();
            v
        };
        assert_eq!(key(&tax), key(&reloaded));
        assert_eq!(tax.categories, reloaded.categories);
    }

    #[test]
    fn entity_list_parses_aliases() {
        let list =
            EntityList::parse("Verizon\nCNN|Cable News Network\n", "<t>", &ingestor()).unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list.entities[0].aliases, ["Verizon"]);
        assert_eq!(list.entities[1].aliases.len(), 2);
        assert_eq!(
            list.entities[1].alias_lemmas[1],
            ["cable", "news", "network"]
        );
    }

    #[test]
    fn entity_list_rejects_ambiguous_aliases() {
        let err = EntityList::parse("Acme|AC\nAjax|AC\n", "<t>", &ingestor()).unwrap_err();
        assert!(matches!(err, TaxonomyError::Parse { line: 2, .. }));
        assert!(matches!(
            EntityList::parse("\n# nothing\n", "<t>", &ingestor()),
            Err(TaxonomyError::EmptyEntityList)
        ));
    }
}
