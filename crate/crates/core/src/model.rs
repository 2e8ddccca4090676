//! Domain types: tagged sentences, slot templates, fact synsets and the
//! benchmark that ties them together.
//!
//! Gold slots never store text. They store token references into their
//! sentence, so every gold word is present in the sentence by construction.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Coarse part-of-speech class. Finer tagsets are mapped down by the tagger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Pos {
    Verb,
    Noun,
    Adj,
    Det,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Ner {
    Person,
    Org,
    Loc,
    Misc,
    None,
}

/// Display class of a token in the annotation UI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Highlight {
    Verb,
    NamedEntity,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub index: usize,
    pub text: String,
    pub pos: Pos,
    pub ner: Ner,
    pub highlight: Highlight,
}

impl Token {
    pub fn new(index: usize, text: impl Into<String>) -> Self {
        Token {
            index,
            text: text.into(),
            pos: Pos::Other,
            ner: Ner::None,
            highlight: Highlight::None,
        }
    }
}

/// Whether `id` is usable as a sentence or synset identifier: non-empty, no
/// control characters (ids appear as TSV fields).
pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(char::is_control) && id.trim() == id
}

/// Whether `text` is usable as a token surface form: non-empty, no
/// whitespace and no control characters (those are reserved as separators
/// in triple keys).
pub fn is_valid_token_text(text: &str) -> bool {
    !text.is_empty() && !text.chars().any(|c| c.is_whitespace() || c.is_control())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedSentence {
    pub id: String,
    pub raw: String,
    pub language: String,
    pub tokens: Vec<Token>,
}

impl TaggedSentence {
    /// Builds an untagged sentence from already tokenized text.
    pub fn from_tokens<S: AsRef<str>>(
        id: impl Into<String>,
        raw: impl Into<String>,
        language: impl Into<String>,
        tokens: &[S],
    ) -> Result<Self, ModelError> {
        let sentence = TaggedSentence {
            id: id.into(),
            raw: raw.into(),
            language: language.into(),
            tokens: tokens
                .iter()
                .enumerate()
                .map(|(i, t)| Token::new(i, t.as_ref()))
                .collect(),
        };
        sentence.validate()?;
        Ok(sentence)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token_text(&self, index: usize) -> Option<&str> {
        self.tokens.get(index).map(|t| t.text.as_str())
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.id.is_empty() {
            return Err(ModelError::EmptySentenceId);
        }
        if !is_valid_id(&self.id) {
            return Err(ModelError::InvalidId(self.id.clone()));
        }
        for (i, tok) in self.tokens.iter().enumerate() {
            if tok.index != i {
                return Err(ModelError::TokenIndexGap {
                    sentence: self.id.clone(),
                    position: i,
                    found: tok.index,
                });
            }
            if !is_valid_token_text(&tok.text) {
                return Err(ModelError::InvalidTokenText {
                    sentence: self.id.clone(),
                    index: i,
                });
            }
        }
        if !tokens_match_raw(self.tokens.iter().map(|t| t.text.as_str()), &self.raw) {
            return Err(ModelError::TokenizationMismatch {
                sentence: self.id.clone(),
            });
        }
        Ok(())
    }
}

/// True when the tokens, with all whitespace removed, spell out `raw` with all
/// whitespace removed.
pub fn tokens_match_raw<'a>(tokens: impl IntoIterator<Item = &'a str>, raw: &str) -> bool {
    let mut raw_chars = raw.chars().filter(|c| !c.is_whitespace());
    for tok in tokens {
        for c in tok.chars().filter(|c| !c.is_whitespace()) {
            if raw_chars.next() != Some(c) {
                return false;
            }
        }
    }
    raw_chars.next().is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotToken {
    pub token_index: usize,
    pub optional: bool,
}

impl SlotToken {
    pub fn required(token_index: usize) -> Self {
        SlotToken {
            token_index,
            optional: false,
        }
    }

    pub fn optional(token_index: usize) -> Self {
        SlotToken {
            token_index,
            optional: true,
        }
    }
}

/// One slot of a gold triple: interchangeable alternatives, each an ordered
/// run of sentence tokens, some of which may be optional.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotTemplate {
    pub alternatives: Vec<Vec<SlotToken>>,
}

impl SlotTemplate {
    pub fn new(alternatives: Vec<Vec<SlotToken>>) -> Self {
        SlotTemplate { alternatives }
    }

    /// Single alternative made of required tokens.
    pub fn span(indices: impl IntoIterator<Item = usize>) -> Self {
        SlotTemplate {
            alternatives: vec![indices.into_iter().map(SlotToken::required).collect()],
        }
    }

    /// Checks the slot against its sentence. `slot` names the slot in errors.
    pub fn validate(&self, sentence: &TaggedSentence, slot: SlotName) -> Result<(), ModelError> {
        if self.alternatives.is_empty() {
            return Err(ModelError::EmptySlot { slot });
        }
        for (alt_idx, alt) in self.alternatives.iter().enumerate() {
            if alt.is_empty() {
                return Err(ModelError::EmptySlot { slot });
            }
            if alt.iter().all(|t| t.optional) {
                return Err(ModelError::AllOptional {
                    slot,
                    alternative: alt_idx,
                });
            }
            let mut prev: Option<usize> = None;
            for st in alt {
                if st.token_index >= sentence.len() {
                    return Err(ModelError::TokenOutOfRange {
                        slot,
                        token_index: st.token_index,
                        sentence_len: sentence.len(),
                    });
                }
                if prev.is_some_and(|p| st.token_index <= p) {
                    return Err(ModelError::UnorderedTokens {
                        slot,
                        alternative: alt_idx,
                    });
                }
                prev = Some(st.token_index);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotName {
    Subject,
    Predicate,
    Object,
}

impl SlotName {
    pub const ALL: [SlotName; 3] = [SlotName::Subject, SlotName::Predicate, SlotName::Object];
}

impl std::fmt::Display for SlotName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SlotName::Subject => "subject",
            SlotName::Predicate => "predicate",
            SlotName::Object => "object",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleTemplate {
    pub subject: SlotTemplate,
    pub predicate: SlotTemplate,
    pub object: SlotTemplate,
}

impl TripleTemplate {
    pub fn new(subject: SlotTemplate, predicate: SlotTemplate, object: SlotTemplate) -> Self {
        TripleTemplate {
            subject,
            predicate,
            object,
        }
    }

    pub fn slot(&self, name: SlotName) -> &SlotTemplate {
        match name {
            SlotName::Subject => &self.subject,
            SlotName::Predicate => &self.predicate,
            SlotName::Object => &self.object,
        }
    }

    pub fn slots(&self) -> [(SlotName, &SlotTemplate); 3] {
        [
            (SlotName::Subject, &self.subject),
            (SlotName::Predicate, &self.predicate),
            (SlotName::Object, &self.object),
        ]
    }

    pub fn validate(&self, sentence: &TaggedSentence) -> Result<(), ModelError> {
        for (name, slot) in self.slots() {
            slot.validate(sentence, name)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactSynset {
    pub id: String,
    pub triples: Vec<TripleTemplate>,
}

impl FactSynset {
    pub fn new(id: impl Into<String>, triples: Vec<TripleTemplate>) -> Self {
        FactSynset {
            id: id.into(),
            triples,
        }
    }

    pub fn validate(&self, sentence: &TaggedSentence) -> Result<(), ModelError> {
        if !is_valid_id(&self.id) {
            return Err(ModelError::InvalidId(self.id.clone()));
        }
        if self.triples.is_empty() {
            return Err(ModelError::EmptySynset {
                sentence: sentence.id.clone(),
                synset: self.id.clone(),
            });
        }
        for t in &self.triples {
            t.validate(sentence).map_err(|e| e.in_synset(&sentence.id, &self.id))?;
        }
        Ok(())
    }
}

/// Sentences plus their fact synsets, keyed by sentence id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldBenchmark {
    pub sentences: Vec<TaggedSentence>,
    pub synsets: BTreeMap<String, Vec<FactSynset>>,
}

impl GoldBenchmark {
    pub fn new(sentences: Vec<TaggedSentence>, synsets: BTreeMap<String, Vec<FactSynset>>) -> Self {
        GoldBenchmark { sentences, synsets }
    }

    pub fn sentence(&self, id: &str) -> Option<&TaggedSentence> {
        self.sentences.iter().find(|s| s.id == id)
    }

    pub fn synsets_for(&self, sentence_id: &str) -> &[FactSynset] {
        self.synsets.get(sentence_id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.values().map(Vec::len).sum()
    }

    /// Sentences in benchmark order, each with its synsets.
    pub fn iter(&self) -> impl Iterator<Item = (&TaggedSentence, &[FactSynset])> {
        self.sentences.iter().map(|s| (s, self.synsets_for(&s.id)))
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let mut seen = HashSet::new();
        for s in &self.sentences {
            s.validate()?;
            if !seen.insert(s.id.as_str()) {
                return Err(ModelError::DuplicateSentenceId(s.id.clone()));
            }
        }
        for (sid, synsets) in &self.synsets {
            let sentence = self
                .sentence(sid)
                .ok_or_else(|| ModelError::UnknownSentence(sid.clone()))?;
            let mut ids = HashSet::new();
            for synset in synsets {
                if !ids.insert(synset.id.as_str()) {
                    return Err(ModelError::DuplicateSynsetId {
                        sentence: sid.clone(),
                        synset: synset.id.clone(),
                    });
                }
                synset.validate(sentence)?;
            }
        }
        Ok(())
    }
}

/// A fully spelled-out triple: three non-empty token-text sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConcreteTriple {
    pub subject: Vec<String>,
    pub predicate: Vec<String>,
    pub object: Vec<String>,
}

impl ConcreteTriple {
    pub fn new(
        subject: Vec<String>,
        predicate: Vec<String>,
        object: Vec<String>,
    ) -> Result<Self, ModelError> {
        for (name, slot) in [
            (SlotName::Subject, &subject),
            (SlotName::Predicate, &predicate),
            (SlotName::Object, &object),
        ] {
            if slot.is_empty() {
                return Err(ModelError::EmptySlot { slot: name });
            }
            if let Some(w) = slot.iter().find(|w| !is_valid_token_text(w)) {
                return Err(ModelError::InvalidWord(w.clone()));
            }
        }
        Ok(ConcreteTriple {
            subject,
            predicate,
            object,
        })
    }

    /// Splits each slot string on whitespace.
    pub fn from_strs(subject: &str, predicate: &str, object: &str) -> Result<Self, ModelError> {
        ConcreteTriple::new(
            split_words(subject),
            split_words(predicate),
            split_words(object),
        )
    }

    pub fn slot(&self, name: SlotName) -> &[String] {
        match name {
            SlotName::Subject => &self.subject,
            SlotName::Predicate => &self.predicate,
            SlotName::Object => &self.object,
        }
    }
}

impl std::fmt::Display for ConcreteTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(\"{}\"; \"{}\"; \"{}\")",
            self.subject.join(" "),
            self.predicate.join(" "),
            self.object.join(" ")
        )
    }
}

/// Whitespace tokenization used for free-text system slots. Control
/// characters also split, so the resulting words are valid token texts.
pub fn split_words(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || c.is_control())
        .filter(|w| !w.is_empty())
        .map(str::to_owned)
        .collect()
}

/// One triple emitted by a system under evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemExtraction {
    pub sentence_id: String,
    pub subject: String,
    pub predicate: String,
    pub object: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
}

impl SystemExtraction {
    pub fn new(
        sentence_id: impl Into<String>,
        subject: impl Into<String>,
        predicate: impl Into<String>,
        object: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let e = SystemExtraction {
            sentence_id: sentence_id.into(),
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
            confidence: None,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn with_confidence(mut self, confidence: f64) -> Result<Self, ModelError> {
        self.confidence = Some(confidence);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for name in SlotName::ALL {
            if split_words(self.slot(name)).is_empty() {
                return Err(ModelError::EmptySlot { slot: name });
            }
        }
        if let Some(c) = self.confidence {
            if !(0.0..=1.0).contains(&c) {
                return Err(ModelError::ConfidenceOutOfRange(c));
            }
        }
        Ok(())
    }

    pub fn slot(&self, name: SlotName) -> &str {
        match name {
            SlotName::Subject => &self.subject,
            SlotName::Predicate => &self.predicate,
            SlotName::Object => &self.object,
        }
    }

    /// The extraction as a whitespace-tokenized triple.
    pub fn to_triple(&self) -> Result<ConcreteTriple, ModelError> {
        ConcreteTriple::from_strs(&self.subject, &self.predicate, &self.object)
    }
}
