use thiserror::Error;

use crate::model::SlotName;

/// Violations of the structural invariants of the domain types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("sentence id is empty")]
    EmptySentenceId,
    #[error("sentence {sentence}: token at position {position} has index {found}")]
    TokenIndexGap {
        sentence: String,
        position: usize,
        found: usize,
    },
    #[error("sentence {sentence}: token {index} is empty or contains whitespace/control characters")]
    InvalidTokenText { sentence: String, index: usize },
    #[error("sentence {sentence}: tokens do not spell out the raw text")]
    TokenizationMismatch { sentence: String },
    #[error("identifier {0:?} is empty, padded, or contains control characters")]
    InvalidId(String),
    #[error("word {0:?} is empty or contains whitespace/control characters")]
    InvalidWord(String),
    #[error("duplicate sentence id {0:?}")]
    DuplicateSentenceId(String),
    #[error("unknown sentence id {0:?}")]
    UnknownSentence(String),
    #[error("sentence {sentence}: duplicate synset id {synset:?}")]
    DuplicateSynsetId { sentence: String, synset: String },
    #[error("sentence {sentence}: synset {synset:?} has no triples")]
    EmptySynset { sentence: String, synset: String },
    #[error("{slot} slot is empty")]
    EmptySlot { slot: SlotName },
    #[error("{slot} slot alternative {alternative} has no required token")]
    AllOptional { slot: SlotName, alternative: usize },
    #[error("{slot} slot references token {token_index} but the sentence has {sentence_len} tokens")]
    TokenOutOfRange {
        slot: SlotName,
        token_index: usize,
        sentence_len: usize,
    },
    #[error("{slot} slot alternative {alternative} does not follow sentence order")]
    UnorderedTokens { slot: SlotName, alternative: usize },
    #[error("confidence {0} is outside [0, 1]")]
    ConfidenceOutOfRange(f64),
    #[error("sentence {sentence}, synset {synset:?}: {source}")]
    InSynset {
        sentence: String,
        synset: String,
        #[source]
        source: Box<ModelError>,
    },
}

impl ModelError {
    pub(crate) fn in_synset(self, sentence: &str, synset: &str) -> Self {
        ModelError::InSynset {
            sentence: sentence.to_owned(),
            synset: synset.to_owned(),
            source: Box::new(self),
        }
    }
}
