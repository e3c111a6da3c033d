//! Lingual perception: tokenization, lexicon-lookup POS tagging, and
//! tagged-word extraction. Turns a typed utterance into the nouns, verbs,
//! and adjectives that act as semantic cues.
//!
//! The tagger is a plain lexicon lookup with suffix fallbacks. That is
//! deliberate: it is deterministic, trivially testable, and covers the
//! utterance inventory this system is exercised with.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use thiserror::Error;

use crate::kb::normalize_label;

#[derive(Debug, Error)]
pub enum LingualError {
    #[error("utterance is empty after trimming")]
    EmptyUtterance,
    #[error("failed to read lingual resource: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed lexicon line (expected token<TAB>tag)")]
    MalformedLexiconLine { line: usize },
    #[error("line {line}: malformed alias line (expected surface<TAB>lemma)")]
    MalformedAliasLine { line: usize },
}

/// A typed utterance with a monotonic tick stamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub text: String,
    pub timestamp: u64,
}

impl Utterance {
    pub fn new(text: impl Into<String>, timestamp: u64) -> Result<Self, LingualError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(LingualError::EmptyUtterance);
        }
        Ok(Utterance { text, timestamp })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WordClass {
    Noun,
    Verb,
    Adjective,
}

impl WordClass {
    /// NN* -> noun, VB* -> verb, JJ* -> adjective; anything else carries no
    /// semantic cue and produces no tagged word.
    pub fn from_tag(tag: &str) -> Option<WordClass> {
        if tag.starts_with("NN") {
            Some(WordClass::Noun)
        } else if tag.starts_with("VB") {
            Some(WordClass::Verb)
        } else if tag.starts_with("JJ") {
            Some(WordClass::Adjective)
        } else {
            None
        }
    }
}

/// A noun, verb, or adjective extracted from an utterance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedWord {
    pub token: String,
    pub tag: String,
    pub klass: WordClass,
    pub lemma: String,
}

/// token -> Penn Treebank tag, looked up case-insensitively.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    map: HashMap<String, String>,
}

impl Lexicon {
    pub fn from_tsv_str(text: &str) -> Result<Self, LingualError> {
        let mut map = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            match (fields.next(), fields.next(), fields.next()) {
                (Some(token), Some(tag), None) if !token.is_empty() && !tag.is_empty() => {
                    map.insert(token.trim().to_lowercase(), tag.trim().to_string());
                }
                _ => return Err(LingualError::MalformedLexiconLine { line: idx + 1 }),
            }
        }
        Ok(Lexicon { map })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LingualError> {
        Self::from_tsv_str(&std::fs::read_to_string(path)?)
    }

    pub fn lookup(&self, token: &str) -> Option<&str> {
        self.map.get(&token.to_lowercase()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Tokens excluded from tagged-word extraction, matched case-insensitively.
#[derive(Debug, Clone, Default)]
pub struct Stopwords {
    set: HashSet<String>,
}

impl Stopwords {
    pub fn from_str_list(text: &str) -> Self {
        let set = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Stopwords { set }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LingualError> {
        Ok(Self::from_str_list(&std::fs::read_to_string(path)?))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.set.contains(&token.to_lowercase())
    }
}

/// Lemma exceptions: surface form -> lemma, applied after normalization.
/// Keys both tagged words and item names into the knowledge base.
#[derive(Debug, Clone, Default)]
pub struct LemmaAliases {
    map: HashMap<String, String>,
}

impl LemmaAliases {
    pub fn from_tsv_str(text: &str) -> Result<Self, LingualError> {
        let mut map = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            match (fields.next(), fields.next(), fields.next()) {
                (Some(surface), Some(lemma), None) if !surface.is_empty() && !lemma.is_empty() => {
                    map.insert(normalize_label(surface), normalize_label(lemma));
                }
                _ => return Err(LingualError::MalformedAliasLine { line: idx + 1 }),
            }
        }
        Ok(LemmaAliases { map })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LingualError> {
        Self::from_tsv_str(&std::fs::read_to_string(path)?)
    }

    /// Normalized lemma for a surface form.
    pub fn lemma_of(&self, surface: &str) -> String {
        let norm = normalize_label(surface);
        self.map.get(&norm).cloned().unwrap_or(norm)
    }
}

/// Splits an utterance into ordered tokens. Punctuation is stripped off
/// token edges; case is preserved (lemmas lowercase downstream).
pub fn tokenize(utterance: &Utterance) -> Vec<String> {
    utterance
        .text
        .split_whitespace()
        .map(|raw| raw.trim_matches(|c: char| c.is_ascii_punctuation()).to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Tags every token exactly once: lexicon lookup first, then suffix
/// heuristics (-ing -> VBG, -ly -> RB, -y/-ish -> JJ), defaulting to NN.
pub fn pos_tag(tokens: &[String], lexicon: &Lexicon) -> Vec<(String, String)> {
    tokens
        .iter()
        .map(|token| {
            let tag = match lexicon.lookup(token) {
                Some(tag) => tag.to_string(),
                None => {
                    let lower = token.to_lowercase();
                    if lower.ends_with("ing") {
                        "VBG".to_string()
                    } else if lower.ends_with("ly") {
                        "RB".to_string()
                    } else if lower.ends_with('y') || lower.ends_with("ish") {
                        "JJ".to_string()
                    } else {
                        "NN".to_string()
                    }
                }
            };
            (token.clone(), tag)
        })
        .collect()
}

/// Keeps the NN*/VB*/JJ* tokens that are not stopwords, in utterance order,
/// deduplicated by lemma. An empty result is legal and signals "no semantic
/// content" downstream.
pub fn extract_tagged_words(
    tagged: &[(String, String)],
    stopwords: &Stopwords,
    aliases: &LemmaAliases,
) -> Vec<TaggedWord> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut words = Vec::new();
    for (token, tag) in tagged {
        let Some(klass) = WordClass::from_tag(tag) else {
            continue;
        };
        if stopwords.contains(token) {
            continue;
        }
        let lemma = aliases.lemma_of(token);
        if lemma.is_empty() || !seen.insert(lemma.clone()) {
            continue;
        }
        words.push(TaggedWord {
            token: token.clone(),
            tag: tag.clone(),
            klass,
            lemma,
        });
    }
    words
}
