//! Tokenization and tokens-of-interest labeling.
//!
//! No statistical models ship here. [`LexiconTagger`] marks verbs from a word
//! list and named entities by capitalization, which is enough to guide an
//! annotator. Accurate tags come in through [`ingest_pretagged`], which
//! accepts the output of any external NLP pipeline.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ModelError;
use crate::model::{tokens_match_raw, Highlight, Ner, Pos, TaggedSentence, Token};

/// Default English verb list: auxiliaries and frequent verbs.
pub const DEFAULT_VERB_LEXICON: &str = include_str!("../data/verbs.txt");

const DETERMINERS: &[&str] = &["a", "an", "the", "this", "that", "these", "those"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NerMode {
    #[default]
    CapitalizationHeuristic,
    PretaggedOnly,
}

/// Which tokens of interest are shown to the annotator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HighlightScheme {
    #[default]
    Full,
    Verbs,
    NamedEntities,
    None,
}

impl HighlightScheme {
    /// Display class of a token with the given labels.
    pub fn highlight(self, pos: Pos, ner: Ner) -> Highlight {
        let show_ne = matches!(self, HighlightScheme::Full | HighlightScheme::NamedEntities);
        let show_verbs = matches!(self, HighlightScheme::Full | HighlightScheme::Verbs);
        if show_ne && ner != Ner::None {
            Highlight::NamedEntity
        } else if show_verbs && pos == Pos::Verb {
            Highlight::Verb
        } else {
            Highlight::None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaggerConfig {
    pub verb_lexicon: BTreeSet<String>,
    pub ner_mode: NerMode,
    pub highlight_scheme: HighlightScheme,
    pub language: String,
}

impl Default for TaggerConfig {
    fn default() -> Self {
        TaggerConfig {
            verb_lexicon: parse_lexicon(DEFAULT_VERB_LEXICON),
            ner_mode: NerMode::default(),
            highlight_scheme: HighlightScheme::default(),
            language: "en".into(),
        }
    }
}

impl TaggerConfig {
    pub fn with_lexicon<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.verb_lexicon = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        self
    }

    pub fn with_scheme(mut self, scheme: HighlightScheme) -> Self {
        self.highlight_scheme = scheme;
        self
    }
}

/// Parses a lexicon file: one word per line, lowercased, blank lines and
/// `#` comments ignored.
pub fn parse_lexicon(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TagError {
    #[error("sentence text is empty")]
    EmptyText,
    #[error("{path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("tokens of sentence {0:?} do not match its raw text")]
    TokenizationMismatch(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

const TERMINAL_PUNCT: &[char] = &['.', ',', '!', '?', ';', ':'];

/// Splits on whitespace and detaches one trailing punctuation character from
/// the last token. Periods inside the sentence stay attached ("Prof.").
/// Languages written without spaces must arrive pre-segmented.
pub fn tokenize(text: &str, _language: &str) -> Result<Vec<String>, TagError> {
    let mut tokens: Vec<String> = text.split_whitespace().map(str::to_owned).collect();
    let Some(last) = tokens.last_mut() else {
        return Err(TagError::EmptyText);
    };
    if last.chars().count() > 1 && last.ends_with(TERMINAL_PUNCT) {
        let p = last.pop().expect("non-empty token");
        tokens.push(p.to_string());
    }
    Ok(tokens)
}

fn is_capitalized(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

/// Pluggable tagging contract.
pub trait Tagger {
    fn tag(&self, id: &str, text: &str) -> Result<TaggedSentence, TagError>;
}

/// Verb lexicon plus capitalization heuristic.
#[derive(Debug, Clone, Default)]
pub struct LexiconTagger {
    pub config: TaggerConfig,
}

impl LexiconTagger {
    pub fn new(config: TaggerConfig) -> Self {
        LexiconTagger { config }
    }
}

impl Tagger for LexiconTagger {
    fn tag(&self, id: &str, text: &str) -> Result<TaggedSentence, TagError> {
        tag(text, id, &self.config)
    }
}

/// Runs of capitalized tokens that count as named entities. A run starting at
/// the first token counts only when it reaches a second token.
fn capitalized_runs(words: &[String]) -> Vec<bool> {
    let mut marks = vec![false; words.len()];
    let mut i = 0;
    while i < words.len() {
        if !is_capitalized(&words[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i < words.len() && is_capitalized(&words[i]) {
            i += 1;
        }
        if start > 0 || i - start > 1 {
            marks[start..i].iter_mut().for_each(|m| *m = true);
        }
    }
    marks
}

pub fn tag(text: &str, id: &str, cfg: &TaggerConfig) -> Result<TaggedSentence, TagError> {
    let words = tokenize(text, &cfg.language)?;
    let entities = match cfg.ner_mode {
        NerMode::CapitalizationHeuristic => capitalized_runs(&words),
        NerMode::PretaggedOnly => vec![false; words.len()],
    };
    let tokens = words
        .into_iter()
        .zip(entities)
        .enumerate()
        .map(|(index, (text, entity))| {
            let lower = text.to_lowercase();
            let pos = if cfg.verb_lexicon.contains(&lower) {
                Pos::Verb
            } else if entity {
                Pos::Noun
            } else if DETERMINERS.contains(&lower.as_str()) {
                Pos::Det
            } else {
                Pos::Other
            };
            let ner = if entity { Ner::Misc } else { Ner::None };
            Token {
                index,
                text,
                pos,
                ner,
                highlight: cfg.highlight_scheme.highlight(pos, ner),
            }
        })
        .collect();
    let sentence = TaggedSentence {
        id: id.to_owned(),
        raw: text.to_owned(),
        language: cfg.language.clone(),
        tokens,
    };
    sentence.validate()?;
    Ok(sentence)
}

/// Maps an external part-of-speech label onto the coarse set.
pub fn map_pos_label(label: &str) -> Pos {
    let upper = label.trim().to_uppercase();
    match upper.as_str() {
        // Universal Dependencies
        "VERB" | "AUX" => return Pos::Verb,
        "NOUN" | "PROPN" => return Pos::Noun,
        "ADJ" => return Pos::Adj,
        "DET" => return Pos::Det,
        "ADP" | "ADV" | "CCONJ" | "INTJ" | "NUM" | "OTHER" | "PART" | "PRON" | "PUNCT" | "SCONJ" | "SYM" | "X" => {
            return Pos::Other
        }
        // Penn and CTB determiners; CTB DEC/DEG/DER/DEV are particles
        "DT" | "PDT" | "WDT" => return Pos::Det,
        "MD" => return Pos::Verb,
        _ => {}
    }
    match upper.chars().next() {
        Some('V') => Pos::Verb,
        Some('N') => Pos::Noun,
        Some('J') => Pos::Adj,
        _ => Pos::Other,
    }
}

/// Maps an external NER label onto the coarse set. BIO prefixes are
/// stripped; "O" and empty labels mean no entity; unknown types become MISC.
pub fn map_ner_label(label: &str) -> Ner {
    let upper = label.trim().to_uppercase();
    let bare = upper
        .strip_prefix("B-")
        .or_else(|| upper.strip_prefix("I-"))
        .or_else(|| upper.strip_prefix("E-"))
        .or_else(|| upper.strip_prefix("S-"))
        .unwrap_or(&upper);
    match bare {
        "" | "O" | "NONE" | "-" => Ner::None,
        "PERSON" | "PER" => Ner::Person,
        "ORG" | "ORGANIZATION" => Ner::Org,
        "LOC" | "LOCATION" | "GPE" => Ner::Loc,
        _ => Ner::Misc,
    }
}

fn schema_error(e: serde_path_to_error::Error<serde_json::Error>) -> TagError {
    TagError::SchemaViolation {
        path: crate::io::json_path(e.path()),
        message: e.into_inner().to_string(),
    }
}

#[derive(Debug, Deserialize)]
struct PretaggedToken {
    text: String,
    #[serde(default)]
    pos: String,
    #[serde(default)]
    ner: String,
}

#[derive(Debug, Deserialize)]
struct PretaggedSentence {
    id: String,
    raw: String,
    #[serde(default)]
    language: Option<String>,
    tokens: Vec<PretaggedToken>,
}

/// Ingests one sentence tagged by an external pipeline:
/// `{"id", "raw", "language"?, "tokens": [{"text", "pos", "ner"}]}`.
/// Highlights are derived under `cfg.highlight_scheme`.
pub fn ingest_pretagged(bytes: &[u8], cfg: &TaggerConfig) -> Result<TaggedSentence, TagError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let input: PretaggedSentence = serde_path_to_error::deserialize(de).map_err(schema_error)?;
    from_pretagged(input, cfg)
}

/// Like [`ingest_pretagged`] for a JSON array of sentences.
pub fn ingest_pretagged_many(bytes: &[u8], cfg: &TaggerConfig) -> Result<Vec<TaggedSentence>, TagError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let inputs: Vec<PretaggedSentence> = serde_path_to_error::deserialize(de).map_err(schema_error)?;
    inputs.into_iter().map(|s| from_pretagged(s, cfg)).collect()
}

fn from_pretagged(input: PretaggedSentence, cfg: &TaggerConfig) -> Result<TaggedSentence, TagError> {
    if input.tokens.is_empty() {
        return Err(TagError::SchemaViolation {
            path: "$.tokens".into(),
            message: "no tokens".into(),
        });
    }
    for (i, t) in input.tokens.iter().enumerate() {
        if !crate::model::is_valid_token_text(&t.text) {
            return Err(TagError::SchemaViolation {
                path: format!("$.tokens[{i}].text"),
                message: "token text is empty or contains whitespace".into(),
            });
        }
    }
    if !tokens_match_raw(input.tokens.iter().map(|t| t.text.as_str()), &input.raw) {
        return Err(TagError::TokenizationMismatch(input.id));
    }
    let tokens = input
        .tokens
        .into_iter()
        .enumerate()
        .map(|(index, t)| {
            let pos = map_pos_label(&t.pos);
            let ner = map_ner_label(&t.ner);
            Token {
                index,
                text: t.text,
                pos,
                ner,
                highlight: cfg.highlight_scheme.highlight(pos, ner),
            }
        })
        .collect();
    let sentence = TaggedSentence {
        id: input.id,
        raw: input.raw,
        language: input.language.unwrap_or_else(|| cfg.language.clone()),
        tokens,
    };
    sentence.validate()?;
    Ok(sentence)
}
