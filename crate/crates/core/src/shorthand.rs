//! Shorthand gold notation and its expansion into concrete triples.
//!
//! A slot is written as one or more `|`-separated alternatives. Each
//! alternative is a run of whitespace-separated words; a word in square
//! brackets is optional:
//!
//! ```text
//! SLOT := ALT ("|" ALT)*
//! ALT  := WORD+
//! WORD := "[" TEXT "]" | TEXT
//! ```
//!
//! `TEXT` is a maximal run of characters that are not whitespace, `[`, `]`
//! or `|`. Expansion takes, per slot, every alternative with every subset of
//! its optional words, and forms the Cartesian product over the three slots.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ModelError;
use crate::model::{
    ConcreteTriple, FactSynset, GoldBenchmark, SlotName, SlotTemplate, SlotToken, TaggedSentence,
    TripleTemplate,
};
use crate::normalize::{triple_key, NormalizationConfig, TripleKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShorthandError {
    #[error("slot text is empty")]
    Empty,
    #[error("unbalanced brackets at byte {offset}")]
    UnbalancedBrackets { offset: usize },
    #[error("optional marker at byte {offset} must enclose exactly one word")]
    InvalidOptional { offset: usize },
    #[error("alternative {alternative} is empty")]
    EmptyAlternative { alternative: usize },
    #[error("alternative {alternative} has no required word")]
    AllOptional { alternative: usize },
    #[error("word {word:?} (alternative {alternative}) cannot be aligned to the sentence")]
    TokenNotInSentence { word: String, alternative: usize },
}

/// A word of a parsed, not yet aligned, shorthand slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorthandWord {
    pub text: String,
    pub optional: bool,
}

/// Parses the shorthand grammar without looking at any sentence.
pub fn parse_shorthand_words(text: &str) -> Result<Vec<Vec<ShorthandWord>>, ShorthandError> {
    if text.trim().is_empty() {
        return Err(ShorthandError::Empty);
    }
    let mut alternatives: Vec<Vec<ShorthandWord>> = Vec::new();
    let mut current: Vec<ShorthandWord> = Vec::new();
    // byte offset of an open `[` and the word seen inside it so far
    let mut open: Option<(usize, Option<String>)> = None;

    let mut chars = text.char_indices().peekable();
    while let Some((offset, c)) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '[' => {
                if open.is_some() {
                    return Err(ShorthandError::UnbalancedBrackets { offset });
                }
                open = Some((offset, None));
            }
            ']' => match open.take() {
                None => return Err(ShorthandError::UnbalancedBrackets { offset }),
                Some((start, None)) => {
                    return Err(ShorthandError::InvalidOptional { offset: start })
                }
                Some((_, Some(word))) => current.push(ShorthandWord {
                    text: word,
                    optional: true,
                }),
            },
            '|' => {
                if let Some((start, _)) = open {
                    return Err(ShorthandError::InvalidOptional { offset: start });
                }
                close_alternative(&mut alternatives, std::mem::take(&mut current))?;
            }
            first => {
                let mut word = String::from(first);
                while let Some(&(_, next)) = chars.peek() {
                    if next.is_whitespace() || matches!(next, '[' | ']' | '|') {
                        break;
                    }
                    word.push(next);
                    chars.next();
                }
                match &mut open {
                    Some((start, Some(_))) => {
                        return Err(ShorthandError::InvalidOptional { offset: *start })
                    }
                    Some((_, slot @ None)) => *slot = Some(word),
                    None => current.push(ShorthandWord {
                        text: word,
                        optional: false,
                    }),
                }
            }
        }
    }
    if let Some((offset, _)) = open {
        return Err(ShorthandError::UnbalancedBrackets { offset });
    }
    close_alternative(&mut alternatives, current)?;
    Ok(alternatives)
}

fn close_alternative(
    alternatives: &mut Vec<Vec<ShorthandWord>>,
    alt: Vec<ShorthandWord>,
) -> Result<(), ShorthandError> {
    let index = alternatives.len();
    if alt.is_empty() {
        return Err(ShorthandError::EmptyAlternative { alternative: index });
    }
    if alt.iter().all(|w| w.optional) {
        return Err(ShorthandError::AllOptional { alternative: index });
    }
    alternatives.push(alt);
    Ok(())
}

/// Greedy left-to-right alignment: each word takes the earliest matching
/// sentence token after the previous match.
fn align_greedy(
    words: &[ShorthandWord],
    sentence: &TaggedSentence,
    eq: impl Fn(&str, &str) -> bool,
) -> Result<Vec<usize>, usize> {
    let mut next = 0;
    let mut out = Vec::with_capacity(words.len());
    for (wi, w) in words.iter().enumerate() {
        let found = sentence.tokens[next..]
            .iter()
            .position(|t| eq(&t.text, &w.text))
            .map(|p| p + next);
        match found {
            Some(i) => {
                out.push(i);
                next = i + 1;
            }
            None => return Err(wi),
        }
    }
    Ok(out)
}

/// Parses a shorthand slot and aligns its words to `sentence`.
///
/// Alignment first tries exact surface matches and falls back to equality
/// under `cfg`, so text produced by [`format_slot_shorthand`] always maps
/// back to the same tokens.
pub fn parse_slot_shorthand(
    text: &str,
    sentence: &TaggedSentence,
    cfg: &NormalizationConfig,
) -> Result<SlotTemplate, ShorthandError> {
    let alternatives = parse_shorthand_words(text)?;
    let mut out = Vec::with_capacity(alternatives.len());
    for (ai, words) in alternatives.iter().enumerate() {
        let indices = align_greedy(words, sentence, |a, b| a == b)
            .or_else(|_| align_greedy(words, sentence, |a, b| cfg.words_equal(a, b)))
            .map_err(|wi| ShorthandError::TokenNotInSentence {
                word: words[wi].text.clone(),
                alternative: ai,
            })?;
        out.push(
            indices
                .into_iter()
                .zip(words)
                .map(|(token_index, w)| SlotToken {
                    token_index,
                    optional: w.optional,
                })
                .collect(),
        );
    }
    Ok(SlotTemplate::new(out))
}

/// Renders a slot in shorthand, using the sentence's token texts.
pub fn format_slot_shorthand(slot: &SlotTemplate, sentence: &TaggedSentence) -> String {
    let mut out = String::new();
    for (ai, alt) in slot.alternatives.iter().enumerate() {
        if ai > 0 {
            out.push_str(" | ");
        }
        for (wi, st) in alt.iter().enumerate() {
            if wi > 0 {
                out.push(' ');
            }
            let text = sentence.token_text(st.token_index).unwrap_or("?");
            if st.optional {
                out.push('[');
                out.push_str(text);
                out.push(']');
            } else {
                out.push_str(text);
            }
        }
    }
    out
}

/// Re-aligns every alternative to the earliest tokens with the same surface
/// text. The result expands to exactly the same triples as `slot`.
pub fn canonicalize_slot(slot: &SlotTemplate, sentence: &TaggedSentence) -> SlotTemplate {
    let cfg = NormalizationConfig::case_sensitive();
    parse_slot_shorthand(&format_slot_shorthand(slot, sentence), sentence, &cfg)
        .unwrap_or_else(|_| slot.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpansionLimits {
    pub max_variants_per_triple: usize,
    pub max_variants_per_synset: usize,
}

impl Default for ExpansionLimits {
    fn default() -> Self {
        ExpansionLimits {
            max_variants_per_triple: 4096,
            max_variants_per_synset: 65536,
        }
    }
}

impl ExpansionLimits {
    pub fn new(per_triple: usize, per_synset: usize) -> Option<Self> {
        (per_triple >= 1 && per_synset >= 1).then_some(ExpansionLimits {
            max_variants_per_triple: per_triple,
            max_variants_per_synset: per_synset,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExpandError {
    #[error("expansion would produce {count} variants, limit is {limit}")]
    VariantLimitExceeded { count: u128, limit: usize },
    #[error("invalid template: {0}")]
    InvalidTemplate(#[from] ModelError),
}

/// Number of surface variants of one slot: Σ over alternatives of 2^k,
/// with k the alternative's optional-token count. Saturates.
pub fn slot_variant_count(slot: &SlotTemplate) -> u128 {
    slot.alternatives.iter().fold(0u128, |acc, alt| {
        let k = alt.iter().filter(|t| t.optional).count() as u32;
        acc.saturating_add(1u128.checked_shl(k).unwrap_or(u128::MAX))
    })
}

/// Number of triples a template enumerates before deduplication.
pub fn variant_count(t: &TripleTemplate) -> u128 {
    t.slots()
        .iter()
        .fold(1u128, |acc, (_, slot)| acc.saturating_mul(slot_variant_count(slot)))
}

fn slot_variants(slot: &SlotTemplate, sentence: &TaggedSentence) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for alt in &slot.alternatives {
        let optional_count = alt.iter().filter(|t| t.optional).count();
        for mask in 0u64..(1u64 << optional_count) {
            let mut bit = 0;
            let words = alt
                .iter()
                .filter(|t| {
                    if !t.optional {
                        return true;
                    }
                    let keep = mask >> bit & 1 == 1;
                    bit += 1;
                    keep
                })
                .map(|t| sentence.tokens[t.token_index].text.clone())
                .collect();
            out.push(words);
        }
    }
    out
}

/// Every surface realization of a template in enumeration order, before
/// deduplication. Its length equals [`variant_count`].
pub fn enumerate_triple(
    t: &TripleTemplate,
    sentence: &TaggedSentence,
    lim: &ExpansionLimits,
) -> Result<Vec<ConcreteTriple>, ExpandError> {
    t.validate(sentence)?;
    let count = variant_count(t);
    if count > lim.max_variants_per_triple as u128 {
        return Err(ExpandError::VariantLimitExceeded {
            count,
            limit: lim.max_variants_per_triple,
        });
    }
    let subjects = slot_variants(&t.subject, sentence);
    let predicates = slot_variants(&t.predicate, sentence);
    let objects = slot_variants(&t.object, sentence);
    let mut out = Vec::with_capacity(count as usize);
    for s in &subjects {
        for p in &predicates {
            for o in &objects {
                out.push(ConcreteTriple {
                    subject: s.clone(),
                    predicate: p.clone(),
                    object: o.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// A set of concrete triples, deduplicated by normalized key.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TripleSet {
    triples: BTreeMap<TripleKey, ConcreteTriple>,
}

impl TripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts unless an equal triple is already present. Returns whether it
    /// was new.
    pub fn insert(&mut self, key: TripleKey, triple: ConcreteTriple) -> bool {
        match self.triples.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(triple);
                true
            }
            btree_map::Entry::Occupied(_) => false,
        }
    }

    pub fn union_with(&mut self, other: TripleSet) {
        for (k, t) in other.triples {
            self.insert(k, t);
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, key: &TripleKey) -> bool {
        self.triples.contains_key(key)
    }

    pub fn get(&self, key: &TripleKey) -> Option<&ConcreteTriple> {
        self.triples.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &TripleKey> {
        self.triples.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TripleKey, &ConcreteTriple)> {
        self.triples.iter()
    }

    pub fn triples(&self) -> impl Iterator<Item = &ConcreteTriple> {
        self.triples.values()
    }
}

pub fn expand_triple(
    t: &TripleTemplate,
    sentence: &TaggedSentence,
    cfg: &NormalizationConfig,
    lim: &ExpansionLimits,
) -> Result<TripleSet, ExpandError> {
    let mut set = TripleSet::new();
    for triple in enumerate_triple(t, sentence, lim)? {
        set.insert(triple_key(&triple, cfg), triple);
    }
    Ok(set)
}

pub fn expand_synset(
    s: &FactSynset,
    sentence: &TaggedSentence,
    cfg: &NormalizationConfig,
    lim: &ExpansionLimits,
) -> Result<TripleSet, ExpandError> {
    if s.triples.is_empty() {
        return Err(ModelError::EmptySynset {
            sentence: sentence.id.clone(),
            synset: s.id.clone(),
        }
        .into());
    }
    let total = s
        .triples
        .iter()
        .fold(0u128, |acc, t| acc.saturating_add(variant_count(t)));
    if total > lim.max_variants_per_synset as u128 {
        return Err(ExpandError::VariantLimitExceeded {
            count: total,
            limit: lim.max_variants_per_synset,
        });
    }
    let mut set = TripleSet::new();
    for t in &s.triples {
        set.union_with(expand_triple(t, sentence, cfg, lim)?);
    }
    Ok(set)
}

/// A normalized triple that belongs to more than one synset of a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldOverlapWarning {
    pub sentence_id: String,
    pub key: TripleKey,
    pub synsets: Vec<String>,
}

#[derive(Debug, Clone, Default)]
struct SentenceIndex {
    synset_ids: Vec<String>,
    keys: BTreeMap<TripleKey, BTreeSet<usize>>,
}

/// Exact-match lookup from (sentence, normalized triple) to the synsets whose
/// expansion contains that triple.
#[derive(Debug, Clone)]
pub struct GoldIndex {
    cfg: NormalizationConfig,
    sentences: BTreeMap<String, SentenceIndex>,
    warnings: Vec<GoldOverlapWarning>,
}

impl GoldIndex {
    pub fn config(&self) -> &NormalizationConfig {
        &self.cfg
    }

    pub fn contains_sentence(&self, sentence_id: &str) -> bool {
        self.sentences.contains_key(sentence_id)
    }

    /// Every sentence of the benchmark, including those without synsets.
    pub fn sentence_ids(&self) -> impl Iterator<Item = &str> {
        self.sentences.keys().map(String::as_str)
    }

    /// Synset ids of a sentence, in benchmark order.
    pub fn synset_ids(&self, sentence_id: &str) -> &[String] {
        self.sentences
            .get(sentence_id)
            .map(|s| s.synset_ids.as_slice())
            .unwrap_or(&[])
    }

    /// Synsets containing `key`, in benchmark order. `None` when the key is
    /// not gold for that sentence.
    pub fn lookup(&self, sentence_id: &str, key: &TripleKey) -> Option<Vec<&str>> {
        let s = self.sentences.get(sentence_id)?;
        s.keys
            .get(key)
            .map(|ps| ps.iter().map(|&p| s.synset_ids[p].as_str()).collect())
    }

    /// All gold keys of a sentence.
    pub fn keys(&self, sentence_id: &str) -> impl Iterator<Item = &TripleKey> {
        self.sentences
            .get(sentence_id)
            .into_iter()
            .flat_map(|s| s.keys.keys())
    }

    pub fn key_count(&self) -> usize {
        self.sentences.values().map(|s| s.keys.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.key_count() == 0
    }

    pub fn warnings(&self) -> &[GoldOverlapWarning] {
        &self.warnings
    }
}

pub fn build_gold_index(
    g: &GoldBenchmark,
    cfg: &NormalizationConfig,
    lim: &ExpansionLimits,
) -> Result<GoldIndex, ExpandError> {
    let mut sentences = BTreeMap::new();
    let mut warnings = Vec::new();
    for (sentence, synsets) in g.iter() {
        let mut idx = SentenceIndex::default();
        for (pos, synset) in synsets.iter().enumerate() {
            idx.synset_ids.push(synset.id.clone());
            for key in expand_synset(synset, sentence, cfg, lim)?.keys() {
                idx.keys.entry(key.clone()).or_default().insert(pos);
            }
        }
        for (key, positions) in &idx.keys {
            if positions.len() > 1 {
                warnings.push(GoldOverlapWarning {
                    sentence_id: sentence.id.clone(),
                    key: key.clone(),
                    synsets: positions.iter().map(|&p| idx.synset_ids[p].clone()).collect(),
                });
            }
        }
        sentences.insert(sentence.id.clone(), idx);
    }
    for sid in g.synsets.keys() {
        if !sentences.contains_key(sid) {
            return Err(ModelError::UnknownSentence(sid.clone()).into());
        }
    }
    Ok(GoldIndex {
        cfg: *cfg,
        sentences,
        warnings,
    })
}

/// Parses the three shorthand slots of one triple.
pub fn parse_triple_shorthand(
    subject: &str,
    predicate: &str,
    object: &str,
    sentence: &TaggedSentence,
    cfg: &NormalizationConfig,
) -> Result<TripleTemplate, (SlotName, ShorthandError)> {
    let parse = |name: SlotName, text: &str| {
        parse_slot_shorthand(text, sentence, cfg).map_err(|e| (name, e))
    };
    Ok(TripleTemplate::new(
        parse(SlotName::Subject, subject)?,
        parse(SlotName::Predicate, predicate)?,
        parse(SlotName::Object, object)?,
    ))
}
