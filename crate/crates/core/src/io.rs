//! Persistent formats.
//!
//! - sentence input: plain text (one sentence per line) or a JSON array of
//!   `{"id", "text"}` objects
//! - annotation state: versioned JSON, deterministic key order
//! - gold TSV: `sentence_id TAB synset_id TAB subject TAB predicate TAB object`
//!   with shorthand slots, one line per triple template
//! - system extractions: `sentence_id TAB subject TAB predicate TAB object
//!   [TAB confidence]`
//!
//! All text is UTF-8 with LF line endings. Every error carries a line number
//! or a JSON path.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::error::ModelError;
use crate::model::{
    FactSynset, GoldBenchmark, SlotName, SystemExtraction, TaggedSentence,
};
use crate::normalize::NormalizationConfig;
use crate::shorthand::{format_slot_shorthand, parse_triple_shorthand, ShorthandError};

pub const STATE_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("input is empty")]
    Empty,
    #[error("line {line}: {message}")]
    MalformedInput { line: usize, message: String },
    #[error("{location}: duplicate id {id:?}")]
    DuplicateId { id: String, location: String },
    #[error("{path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("unsupported state version {found:?} (expected {STATE_VERSION:?})")]
    VersionUnsupported { found: String },
    #[error("line {line}: confidence {value} is outside [0, 1]")]
    ConfidenceOutOfRange { line: usize, value: f64 },
    #[error("line {line}: unknown sentence id {id:?}")]
    UnknownSentence { line: usize, id: String },
    #[error("line {line}, {slot}: {source}")]
    Shorthand {
        line: usize,
        slot: SlotName,
        #[source]
        source: ShorthandError,
    },
}

fn as_utf8(bytes: &[u8]) -> Result<&str, FormatError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        FormatError::MalformedInput {
            line,
            message: "invalid UTF-8".into(),
        }
    })?;
    Ok(text.strip_prefix('\u{feff}').unwrap_or(text))
}

/// Non-blank lines with their 1-based line numbers. A trailing CR is dropped.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn json_error(e: serde_json::Error) -> FormatError {
    FormatError::SchemaViolation {
        path: "$".into(),
        message: format!("{e}"),
    }
}

/// Renders a deserializer path as `$`, `$[1].id` or `$.a.b[2]`.
pub(crate) fn json_path(p: &serde_path_to_error::Path) -> String {
    match p.to_string().as_str() {
        "." => "$".to_string(),
        p if p.starts_with('[') => format!("${p}"),
        p => format!("$.{p}"),
    }
}

fn path_error<E: std::fmt::Display>(e: serde_path_to_error::Error<E>) -> FormatError {
    FormatError::SchemaViolation {
        path: json_path(e.path()),
        message: e.into_inner().to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentenceInput {
    pub id: String,
    pub text: String,
}

/// Reads unannotated sentences. Plain-text lines get ids `s1`, `s2`, ...
/// in order; blank lines are skipped.
pub fn load_sentences(bytes: &[u8]) -> Result<Vec<SentenceInput>, FormatError> {
    let text = as_utf8(bytes)?;
    if text.trim().is_empty() {
        return Err(FormatError::Empty);
    }
    if text.trim_start().starts_with('[') {
        let de = &mut serde_json::Deserializer::from_str(text);
        let items: Vec<SentenceInput> = serde_path_to_error::deserialize(de).map_err(path_error)?;
        if items.is_empty() {
            return Err(FormatError::Empty);
        }
        let mut seen = HashSet::new();
        for (i, item) in items.iter().enumerate() {
            if !crate::model::is_valid_id(&item.id) {
                return Err(FormatError::SchemaViolation {
                    path: format!("$[{i}].id"),
                    message: "id is empty, padded, or contains control characters".into(),
                });
            }
            if item.text.trim().is_empty() {
                return Err(FormatError::SchemaViolation {
                    path: format!("$[{i}].text"),
                    message: "sentence text is empty".into(),
                });
            }
            if !seen.insert(item.id.as_str()) {
                return Err(FormatError::DuplicateId {
                    id: item.id.clone(),
                    location: format!("$[{i}].id"),
                });
            }
        }
        return Ok(items);
    }
    Ok(lines(text)
        .enumerate()
        .map(|(n, (_, line))| SentenceInput {
            id: format!("s{}", n + 1),
            text: line.trim().to_owned(),
        })
        .collect())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StateMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub updated: Option<String>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

/// Everything an annotation session produces. Unknown top-level and `meta`
/// fields survive a load/save cycle untouched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationState {
    pub version: String,
    pub sentences: Vec<TaggedSentence>,
    #[serde(default)]
    pub synsets: BTreeMap<String, Vec<FactSynset>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cursor: Option<String>,
    #[serde(default)]
    pub meta: StateMeta,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl AnnotationState {
    /// Fresh state over `sentences` with the cursor on the first one.
    pub fn new(sentences: Vec<TaggedSentence>) -> Self {
        AnnotationState {
            version: STATE_VERSION.to_owned(),
            cursor: sentences.first().map(|s| s.id.clone()),
            sentences,
            synsets: BTreeMap::new(),
            meta: StateMeta::default(),
            extra: BTreeMap::new(),
        }
    }

    pub fn from_gold(g: GoldBenchmark) -> Self {
        let mut st = AnnotationState::new(g.sentences);
        st.synsets = g.synsets;
        st
    }

    pub fn gold(&self) -> GoldBenchmark {
        GoldBenchmark::new(self.sentences.clone(), self.synsets.clone())
    }

    pub fn sentence(&self, id: &str) -> Option<&TaggedSentence> {
        self.sentences.iter().find(|s| s.id == id)
    }

    /// Checks the state invariants, reporting the JSON path of the first
    /// violation.
    pub fn validate(&self) -> Result<(), FormatError> {
        let violation = |path: String, e: ModelError| FormatError::SchemaViolation {
            path,
            message: e.to_string(),
        };
        let mut ids = HashSet::new();
        for (i, s) in self.sentences.iter().enumerate() {
            s.validate().map_err(|e| violation(format!("$.sentences[{i}]"), e))?;
            if !ids.insert(s.id.as_str()) {
                return Err(FormatError::DuplicateId {
                    id: s.id.clone(),
                    location: format!("$.sentences[{i}].id"),
                });
            }
        }
        for (sid, synsets) in &self.synsets {
            let sentence = self.sentence(sid).ok_or_else(|| {
                violation(format!("$.synsets.{sid}"), ModelError::UnknownSentence(sid.clone()))
            })?;
            let mut seen = HashSet::new();
            for (j, synset) in synsets.iter().enumerate() {
                let path = format!("$.synsets.{sid}[{j}]");
                if !seen.insert(synset.id.as_str()) {
                    return Err(FormatError::DuplicateId {
                        id: synset.id.clone(),
                        location: format!("{path}.id"),
                    });
                }
                synset.validate(sentence).map_err(|e| violation(path, e))?;
            }
        }
        if let Some(c) = &self.cursor {
            if !ids.contains(c.as_str()) {
                return Err(violation("$.cursor".into(), ModelError::UnknownSentence(c.clone())));
            }
        }
        Ok(())
    }
}

/// Serializes a state as pretty-printed JSON with a trailing newline. Equal
/// states give identical bytes.
pub fn save_state(st: &AnnotationState) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(st).expect("state serializes to JSON");
    out.push(b'\n');
    out
}

pub fn load_state(bytes: &[u8]) -> Result<AnnotationState, FormatError> {
    let st = parse_state(bytes)?;
    st.validate()?;
    Ok(st)
}

/// Decodes a state and checks its version without checking the invariants
/// that [`AnnotationState::validate`] enforces.
pub fn parse_state(bytes: &[u8]) -> Result<AnnotationState, FormatError> {
    let text = as_utf8(bytes)?;
    let value: Value = serde_json::from_str(text).map_err(json_error)?;
    match value.get("version") {
        Some(Value::String(v)) if v == STATE_VERSION => {}
        Some(Value::String(v)) => return Err(FormatError::VersionUnsupported { found: v.clone() }),
        Some(other) => {
            return Err(FormatError::SchemaViolation {
                path: "$.version".into(),
                message: format!("expected a string, found {other}"),
            })
        }
        None if value.is_object() => {
            return Err(FormatError::SchemaViolation {
                path: "$.version".into(),
                message: "missing field".into(),
            })
        }
        None => {
            return Err(FormatError::SchemaViolation {
                path: "$".into(),
                message: "expected a JSON object".into(),
            })
        }
    }
    serde_path_to_error::deserialize(value).map_err(path_error)
}

/// Human-readable gold export, one line per triple template in sentence,
/// synset, template order.
pub fn export_tsv(st: &AnnotationState) -> Vec<u8> {
    let mut out = String::new();
    for sentence in &st.sentences {
        for synset in st.synsets.get(&sentence.id).into_iter().flatten() {
            for t in &synset.triples {
                out.push_str(&sentence.id);
                out.push('\t');
                out.push_str(&synset.id);
                for (_, slot) in t.slots() {
                    out.push('\t');
                    out.push_str(&format_slot_shorthand(slot, sentence));
                }
                out.push('\n');
            }
        }
    }
    out.into_bytes()
}

/// One line of a gold TSV file, not yet aligned to its sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldTsvRow {
    pub line: usize,
    pub sentence_id: String,
    pub synset_id: String,
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

pub fn read_gold_tsv(bytes: &[u8]) -> Result<Vec<GoldTsvRow>, FormatError> {
    let text = as_utf8(bytes)?;
    let mut rows = Vec::new();
    for (line, l) in lines(text) {
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() != 5 {
            return Err(FormatError::MalformedInput {
                line,
                message: format!("expected 5 tab-separated fields, found {}", fields.len()),
            });
        }
        for (name, f) in ["sentence id", "synset id"].iter().zip(&fields[..2]) {
            if !crate::model::is_valid_id(f) {
                return Err(FormatError::MalformedInput {
                    line,
                    message: format!("invalid {name} {f:?}"),
                });
            }
        }
        rows.push(GoldTsvRow {
            line,
            sentence_id: fields[0].to_owned(),
            synset_id: fields[1].to_owned(),
            subject: fields[2].to_owned(),
            predicate: fields[3].to_owned(),
            object: fields[4].to_owned(),
        });
    }
    Ok(rows)
}

/// Rebuilds a benchmark from gold TSV. Synsets keep the order in which their
/// ids first appear.
pub fn import_gold_tsv(
    bytes: &[u8],
    sentences: &[TaggedSentence],
    cfg: &NormalizationConfig,
) -> Result<GoldBenchmark, FormatError> {
    let by_id: BTreeMap<&str, &TaggedSentence> =
        sentences.iter().map(|s| (s.id.as_str(), s)).collect();
    let mut synsets: BTreeMap<String, Vec<FactSynset>> = BTreeMap::new();
    for row in read_gold_tsv(bytes)? {
        let sentence = by_id.get(row.sentence_id.as_str()).ok_or_else(|| {
            FormatError::UnknownSentence {
                line: row.line,
                id: row.sentence_id.clone(),
            }
        })?;
        let template = parse_triple_shorthand(&row.subject, &row.predicate, &row.object, sentence, cfg)
            .map_err(|(slot, source)| FormatError::Shorthand {
                line: row.line,
                slot,
                source,
            })?;
        let list = synsets.entry(row.sentence_id).or_default();
        match list.iter_mut().find(|s| s.id == row.synset_id) {
            Some(s) => s.triples.push(template),
            None => list.push(FactSynset::new(row.synset_id, vec![template])),
        }
    }
    Ok(GoldBenchmark::new(sentences.to_vec(), synsets))
}

pub fn load_system_extractions(bytes: &[u8]) -> Result<Vec<SystemExtraction>, FormatError> {
    let text = as_utf8(bytes)?;
    let mut out = Vec::new();
    for (line, l) in lines(text) {
        let fields: Vec<&str> = l.split('\t').collect();
        if !(4..=5).contains(&fields.len()) {
            return Err(FormatError::MalformedInput {
                line,
                message: format!("expected 4 or 5 tab-separated fields, found {}", fields.len()),
            });
        }
        let confidence = match fields.get(4).map(|f| f.trim()) {
            None | Some("") => None,
            Some(f) => {
                let value: f64 = f.parse().map_err(|_| FormatError::MalformedInput {
                    line,
                    message: format!("confidence {f:?} is not a number"),
                })?;
                if !(0.0..=1.0).contains(&value) {
                    return Err(FormatError::ConfidenceOutOfRange { line, value });
                }
                Some(value)
            }
        };
        let e = SystemExtraction {
            sentence_id: fields[0].trim().to_owned(),
            subject: fields[1].trim().to_owned(),
            predicate: fields[2].trim().to_owned(),
            object: fields[3].trim().to_owned(),
            confidence,
        };
        if e.sentence_id.is_empty() {
            return Err(FormatError::MalformedInput {
                line,
                message: "empty sentence id".into(),
            });
        }
        e.validate().map_err(|err| FormatError::MalformedInput {
            line,
            message: err.to_string(),
        })?;
        out.push(e);
    }
    Ok(out)
}

/// Writes extractions in the format read by [`load_system_extractions`].
pub fn write_system_extractions(extractions: &[SystemExtraction]) -> Vec<u8> {
    let mut out = String::new();
    for e in extractions {
        out.push_str(&format!("{}\t{}\t{}\t{}", e.sentence_id, e.subject, e.predicate, e.object));
        if let Some(c) = e.confidence {
            out.push_str(&format!("\t{c}"));
        }
        out.push('\n');
    }
    out.into_bytes()
}
