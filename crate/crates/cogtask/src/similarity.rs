//! Semantic similarity: signatures, the Jaccard similarity index, score
//! matrices over tagged words and visible items, and normalized shares.
//!
//! Both operands of the similarity index are semantic signatures: the term
//! itself plus its knowledge-base neighborhood within a configurable hop
//! radius (default 1). Scores land in [0, 1]; a zero cell means the two
//! neighborhoods are disjoint.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::kb::{normalize_label, KnowledgeBase};
use crate::lingual::{LemmaAliases, TaggedWord};

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("no semantic association: every available item scored zero")]
    NoAssociation,
}

/// The set representation of a term: the term plus its KB neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticSignature {
    pub term: String,
    pub members: BTreeSet<String>,
    pub radius: usize,
}

/// Builds the signature of a term: `{term} ∪ neighbors(kb, term, radius)`.
/// A term unknown to the KB yields the singleton `{term}`.
pub fn signature(kb: &KnowledgeBase, term: &str, radius: usize) -> SemanticSignature {
    assert!(radius >= 1, "radius must be >= 1");
    let term = normalize_label(term);
    let mut members = kb.neighbors(&term, radius);
    members.insert(term.clone());
    SemanticSignature { term, members, radius }
}

/// The similarity index: |A ∩ B| / |A ∪ B|.
pub fn jaccard(a: &SemanticSignature, b: &SemanticSignature) -> f64 {
    let intersection = a.members.intersection(&b.members).count();
    let union = a.members.union(&b.members).count();
    if union == 0 {
        return 0.0;
    }
    intersection as f64 / union as f64
}

/// Tagged-word (rows) by item (columns) score matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    rows: Vec<String>,
    cols: Vec<String>,
    cells: Vec<Vec<f64>>,
}

impl ScoreTable {
    pub fn new(rows: Vec<String>, cols: Vec<String>, cells: Vec<Vec<f64>>) -> Self {
        assert_eq!(rows.len(), cells.len(), "one cell row per word");
        for row in &cells {
            assert_eq!(cols.len(), row.len(), "complete matrix required");
            for &v in row {
                assert!((0.0..=1.0).contains(&v), "score {v} outside [0,1]");
            }
        }
        ScoreTable { rows, cols, cells }
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn get(&self, word: &str, item: &str) -> Option<f64> {
        let r = self.rows.iter().position(|w| w == word)?;
        let c = self.cols.iter().position(|i| i == item)?;
        Some(self.cells[r][c])
    }

    /// Per-item maximum over all word rows. With no rows every item scores
    /// zero, which downstream treats as "no cue".
    pub fn row_max(&self) -> BTreeMap<String, f64> {
        let mut out: BTreeMap<String, f64> = BTreeMap::new();
        for (c, item) in self.cols.iter().enumerate() {
            let best = self
                .cells
                .iter()
                .map(|row| row[c])
                .fold(0.0f64, f64::max);
            out.insert(item.clone(), best);
        }
        out
    }

    /// TSV rendering in the usual layout: words vertical, items horizontal,
    /// scores at 7 decimal places.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for col in &self.cols {
            out.push('\t');
            out.push_str(col);
        }
        out.push('\n');
        for (r, word) in self.rows.iter().enumerate() {
            out.push_str(word);
            for v in &self.cells[r] {
                out.push_str(&format!("\t{v:.7}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Scores every (lemma, item) pair: `cell = jaccard(sig(lemma), sig(item))`.
/// Item names pass through the alias map and label normalization before the
/// KB lookup; the column labels keep the given item names.
pub fn score_matrix(
    kb: &KnowledgeBase,
    lemmas: &[String],
    items: &[String],
    radius: usize,
    aliases: &LemmaAliases,
) -> ScoreTable {
    let item_sigs: Vec<SemanticSignature> = items
        .iter()
        .map(|item| signature(kb, &aliases.lemma_of(item), radius))
        .collect();
    let mut cells = Vec::with_capacity(lemmas.len());
    for lemma in lemmas {
        let word_sig = signature(kb, &aliases.lemma_of(lemma), radius);
        cells.push(item_sigs.iter().map(|is| jaccard(&word_sig, is)).collect());
    }
    ScoreTable::new(lemmas.to_vec(), items.to_vec(), cells)
}

/// `score_matrix` keyed by the lemmas of already-extracted tagged words.
pub fn score_matrix_for_words(
    kb: &KnowledgeBase,
    words: &[TaggedWord],
    items: &[String],
    radius: usize,
    aliases: &LemmaAliases,
) -> ScoreTable {
    let lemmas: Vec<String> = words.iter().map(|w| w.lemma.clone()).collect();
    score_matrix(kb, &lemmas, items, radius, aliases)
}

/// Converts a score row into percentage shares over the available items:
/// `share(i) = 100 * score(i) / Σ score(j)`. An all-zero row is an error,
/// distinct from a tie.
pub fn normalized_shares(
    row: &BTreeMap<String, f64>,
    available: &[String],
) -> Result<BTreeMap<String, f64>, SimilarityError> {
    let total: f64 = available
        .iter()
        .map(|item| row.get(item).copied().unwrap_or(0.0))
        .sum();
    if total <= 0.0 {
        return Err(SimilarityError::NoAssociation);
    }
    Ok(available
        .iter()
        .map(|item| {
            let score = row.get(item).copied().unwrap_or(0.0);
            (item.clone(), 100.0 * score / total)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::parse_kb;
    use crate::lingual::LemmaAliases;

    fn no_aliases() -> LemmaAliases {
        LemmaAliases::default()
    }

    fn sig_of(labels: &[&str]) -> SemanticSignature {
        SemanticSignature {
            term: labels[0].to_string(),
            members: labels.iter().map(|s| s.to_string()).collect(),
            radius: 1,
        }
    }

    #[test]
    fn signature_is_term_plus_neighbors() {
        let kb = parse_kb("tea\tRelatedTo\thot\t1.0\ntea\tIS_A\tdrink\t1.0\n").unwrap();
        let sig = signature(&kb, "tea", 1);
        let members: Vec<&str> = sig.members.iter().map(String::as_str).collect();
        assert_eq!(members, vec!["drink", "hot", "tea"]);
    }

    #[test]
    fn signature_of_unknown_term_is_singleton() {
        let kb = parse_kb("tea\tIS_A\tdrink\t1.0\n").unwrap();
        let sig = signature(&kb, "zzz", 1);
        assert_eq!(sig.members.len(), 1);
        assert!(sig.members.contains("zzz"));
    }

    #[test]
    fn fixture_cold_signature_matches_brute_force_scan() {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/kb.tsv"
        ))
        .unwrap();
        // Independent scan: every label sharing a triple with "cold".
        let mut expected: BTreeSet<String> = BTreeSet::new();
        for line in text.lines() {
            if line.is_empty() || line.starts_with('#') || line.starts_with("@kind") {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f[0] == "cold" {
                expected.insert(f[2].to_string());
            }
            if f[2] == "cold" {
                expected.insert(f[0].to_string());
            }
        }
        expected.insert("cold".to_string());
        let kb = parse_kb(&text).unwrap();
        assert_eq!(signature(&kb, "cold", 1).members, expected);
    }

    #[test]
    fn jaccard_hand_counted_examples() {
        assert!((jaccard(&sig_of(&["a", "b"]), &sig_of(&["b", "c"])) - 1.0 / 3.0).abs() < 1e-15);
        let s = sig_of(&["x", "y", "z"]);
        assert_eq!(jaccard(&s, &s), 1.0);
        assert_eq!(jaccard(&sig_of(&["a"]), &sig_of(&["b"])), 0.0);
    }

    #[test]
    fn cold_row_scores_tea_positive_and_teapot_zero() {
        let kb = crate::kb::load_kb(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/kb.tsv"))
            .unwrap();
        let table = score_matrix(
            &kb,
            &["cold".to_string()],
            &["tea".to_string(), "teapot".to_string()],
            1,
            &no_aliases(),
        );
        assert!(table.get("cold", "tea").unwrap() > 0.0);
        assert_eq!(table.get("cold", "teapot").unwrap(), 0.0);
    }

    #[test]
    fn word_against_itself_scores_one() {
        let kb = crate::kb::load_kb(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/kb.tsv"))
            .unwrap();
        let table = score_matrix(
            &kb,
            &["tea".to_string()],
            &["tea".to_string()],
            1,
            &no_aliases(),
        );
        assert_eq!(table.get("tea", "tea").unwrap(), 1.0);
    }

    #[test]
    fn shares_single_positive_item_is_total() {
        let row: BTreeMap<String, f64> = [("tea".to_string(), 0.25)].into();
        let shares = normalized_shares(&row, &["tea".to_string()]).unwrap();
        assert!((shares["tea"] - 100.0).abs() < 1e-12);
    }

    #[test]
    fn shares_split_evenly_on_equal_scores() {
        let row: BTreeMap<String, f64> =
            [("a".to_string(), 0.2), ("b".to_string(), 0.2)].into();
        let shares = normalized_shares(&row, &["a".to_string(), "b".to_string()]).unwrap();
        assert!((shares["a"] - 50.0).abs() < 1e-12);
        assert!((shares["b"] - 50.0).abs() < 1e-12);
    }

    #[test]
    fn shares_reject_all_zero_row() {
        let row: BTreeMap<String, f64> = [("a".to_string(), 0.0)].into();
        assert!(matches!(
            normalized_shares(&row, &["a".to_string()]),
            Err(SimilarityError::NoAssociation)
        ));
    }

    #[test]
    fn shares_preserve_argmax() {
        let row: BTreeMap<String, f64> = [
            ("a".to_string(), 0.1),
            ("b".to_string(), 0.3),
            ("c".to_string(), 0.2),
        ]
        .into();
        let available: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let shares = normalized_shares(&row, &available).unwrap();
        let best_raw = available.iter().max_by(|x, y| row[*x].total_cmp(&row[*y])).unwrap();
        let best_share = available
            .iter()
            .max_by(|x, y| shares[*x].total_cmp(&shares[*y]))
            .unwrap();
        assert_eq!(best_raw, best_share);
        let total: f64 = shares.values().sum();
        assert!((total - 100.0).abs() < 1e-9);
    }

    #[test]
    fn signature_members_grow_with_radius() {
        let kb = crate::kb::load_kb(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/kb.tsv"))
            .unwrap();
        for term in ["cold", "coffee", "bread"] {
            let s1 = signature(&kb, term, 1);
            let s2 = signature(&kb, term, 2);
            assert!(s1.members.is_subset(&s2.members));
        }
    }

    #[test]
    fn row_max_takes_per_item_maximum() {
        let table = ScoreTable::new(
            vec!["w1".to_string(), "w2".to_string()],
            vec!["i1".to_string(), "i2".to_string()],
            vec![vec![0.4, 0.1], vec![0.2, 0.3]],
        );
        let row = table.row_max();
        assert_eq!(row["i1"], 0.4);
        assert_eq!(row["i2"], 0.3);
    }

    #[test]
    fn empty_word_list_gives_zero_row_table() {
        let kb = parse_kb("tea\tIS_A\tdrink\t1.0\n").unwrap();
        let table = score_matrix(&kb, &[], &["tea".to_string()], 1, &no_aliases());
        assert!(table.rows().is_empty());
        assert_eq!(table.row_max()["tea"], 0.0);
    }
}
