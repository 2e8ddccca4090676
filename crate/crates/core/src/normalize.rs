//! Normalization rules that define when two triples are "the same".
//!
//! Triple equality is slot-wise equality of normalized token sequences.
//! Word order and token identity are always strict.

use serde::{Deserialize, Serialize};

use crate::model::ConcreteTriple;

/// Token separator inside a key slot. Tokens never contain whitespace.
const TOKEN_SEP: char = ' ';
/// Slot separator. Tokens never contain control characters.
const SLOT_SEP: char = '\u{1f}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct NormalizationConfig {
    pub case_fold: bool,
    pub strip_terminal_punct: bool,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        NormalizationConfig {
            case_fold: true,
            strip_terminal_punct: false,
        }
    }
}

impl NormalizationConfig {
    pub fn case_sensitive() -> Self {
        NormalizationConfig {
            case_fold: false,
            ..Default::default()
        }
    }

    /// Normalizes a single word.
    pub fn word(&self, word: &str) -> String {
        if self.case_fold {
            word.to_lowercase()
        } else {
            word.to_owned()
        }
    }

    /// Whether two words are equal under this configuration.
    pub fn words_equal(&self, a: &str, b: &str) -> bool {
        if self.case_fold {
            a == b || a.to_lowercase() == b.to_lowercase()
        } else {
            a == b
        }
    }
}

fn is_punct_token(word: &str) -> bool {
    let mut chars = word.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => c.is_ascii_punctuation() || "。，、！？；：…“”‘’«»".contains(c),
        _ => false,
    }
}

/// Applies `cfg` to a slot's words. A trailing single-punctuation token is
/// dropped under `strip_terminal_punct`, unless it is the only word.
pub fn normalize_slot<S: AsRef<str>>(words: &[S], cfg: &NormalizationConfig) -> Vec<String> {
    let mut end = words.len();
    if cfg.strip_terminal_punct && end > 1 && is_punct_token(words[end - 1].as_ref()) {
        end -= 1;
    }
    words[..end].iter().map(|w| cfg.word(w.as_ref())).collect()
}

/// Canonical identity of a normalized triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TripleKey(String);

impl TripleKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The three normalized slots encoded in this key.
    pub fn slots(&self) -> impl Iterator<Item = Vec<&str>> {
        self.0.split(SLOT_SEP).map(|s| s.split(TOKEN_SEP).collect())
    }
}

impl std::fmt::Display for TripleKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let slots: Vec<String> = self.slots().map(|s| s.join(" ")).collect();
        write!(f, "({})", slots.join("; "))
    }
}

pub fn triple_key(t: &ConcreteTriple, cfg: &NormalizationConfig) -> TripleKey {
    let mut key = String::new();
    for (i, slot) in [&t.subject, &t.predicate, &t.object].into_iter().enumerate() {
        if i > 0 {
            key.push(SLOT_SEP);
        }
        for (j, w) in normalize_slot(slot, cfg).iter().enumerate() {
            if j > 0 {
                key.push(TOKEN_SEP);
            }
            key.push_str(w);
        }
    }
    TripleKey(key)
}
