//! Structural and guideline checks over gold annotations.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::io::{read_gold_tsv, FormatError};
use crate::model::{FactSynset, GoldBenchmark, SlotTemplate, TaggedSentence};
use crate::normalize::{NormalizationConfig, TripleKey};
use crate::shorthand::{expand_synset, parse_triple_shorthand, ExpandError, ExpansionLimits, ShorthandError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Note,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    UnknownSentence,
    DuplicateSynsetId,
    EmptySynset,
    EmptySlot,
    ExplicitnessViolation,
    UnorderedTokens,
    AllOptionalAlternative,
    MalformedShorthand,
    VariantLimitExceeded,
    GoldOverlap,
    AdjacentOptionalReview,
}

impl DiagnosticCode {
    pub fn severity(self) -> Severity {
        match self {
            DiagnosticCode::GoldOverlap | DiagnosticCode::VariantLimitExceeded => Severity::Warning,
            DiagnosticCode::AdjacentOptionalReview => Severity::Note,
            _ => Severity::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub sentence_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synset_id: Option<String>,
    pub code: DiagnosticCode,
    pub message: String,
}

/// Collects diagnostics and sorts them by (sentence, synset, code) using
/// benchmark order for sentences and synsets.
#[derive(Default)]
pub(crate) struct DiagnosticSink {
    items: Vec<((usize, usize), Diagnostic)>,
}

impl DiagnosticSink {
    pub(crate) fn push(
        &mut self,
        order: (usize, usize),
        sentence_id: &str,
        synset_id: Option<&str>,
        code: DiagnosticCode,
        message: String,
    ) {
        self.items.push((
            order,
            Diagnostic {
                severity: code.severity(),
                sentence_id: sentence_id.to_owned(),
                synset_id: synset_id.map(str::to_owned),
                code,
                message,
            },
        ));
    }

    pub(crate) fn finish(mut self) -> Vec<Diagnostic> {
        self.items.sort_by(|(a, da), (b, db)| {
            a.cmp(b)
                .then(da.code.cmp(&db.code))
                .then_with(|| da.message.cmp(&db.message))
        });
        self.items.into_iter().map(|(_, d)| d).collect()
    }
}

fn lint_slot(
    slot: &SlotTemplate,
    sentence: &TaggedSentence,
    label: &str,
    mut report: impl FnMut(DiagnosticCode, String),
) -> bool {
    let mut valid = true;
    if slot.alternatives.is_empty() {
        report(DiagnosticCode::EmptySlot, format!("{label} has no alternatives"));
        return false;
    }
    for (ai, alt) in slot.alternatives.iter().enumerate() {
        if alt.is_empty() {
            report(DiagnosticCode::EmptySlot, format!("{label} alternative {ai} is empty"));
            valid = false;
            continue;
        }
        for st in alt {
            if st.token_index >= sentence.len() {
                report(
                    DiagnosticCode::ExplicitnessViolation,
                    format!("{label} alternative {ai} references token {} outside the sentence", st.token_index),
                );
                valid = false;
            }
        }
        if alt.windows(2).any(|w| w[1].token_index <= w[0].token_index) {
            report(
                DiagnosticCode::UnorderedTokens,
                format!("{label} alternative {ai} does not follow sentence order"),
            );
            valid = false;
        }
        if alt.iter().all(|t| t.optional) {
            report(
                DiagnosticCode::AllOptionalAlternative,
                format!("{label} alternative {ai} has no required token"),
            );
            valid = false;
        }
        if alt.windows(2).any(|w| w[0].optional && w[1].optional) {
            report(
                DiagnosticCode::AdjacentOptionalReview,
                format!("{label} alternative {ai} has adjacent optional tokens; their mixed subsets are also accepted"),
            );
        }
    }
    valid
}

pub(crate) fn lint_into(
    g: &GoldBenchmark,
    cfg: &NormalizationConfig,
    lim: &ExpansionLimits,
    sink: &mut DiagnosticSink,
) {
    let positions: BTreeMap<&str, usize> = g
        .sentences
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id.as_str(), i))
        .collect();

    for (sid, synsets) in &g.synsets {
        let Some(&spos) = positions.get(sid.as_str()) else {
            sink.push(
                (usize::MAX, 0),
                sid,
                None,
                DiagnosticCode::UnknownSentence,
                "synsets reference a sentence that is not in the benchmark".into(),
            );
            continue;
        };
        let sentence = &g.sentences[spos];
        let mut seen_ids = HashSet::new();
        let mut keys: BTreeMap<TripleKey, BTreeSet<usize>> = BTreeMap::new();

        for (ypos, synset) in synsets.iter().enumerate() {
            let order = (spos, ypos + 1);
            let yid = Some(synset.id.as_str());
            if !seen_ids.insert(synset.id.as_str()) {
                sink.push(order, sid, yid, DiagnosticCode::DuplicateSynsetId, "synset id is used twice".into());
            }
            if synset.triples.is_empty() {
                sink.push(order, sid, yid, DiagnosticCode::EmptySynset, "synset has no triples".into());
                continue;
            }
            let mut valid = true;
            for (ti, t) in synset.triples.iter().enumerate() {
                for (name, slot) in t.slots() {
                    let label = format!("triple {ti} {name}");
                    valid &= lint_slot(slot, sentence, &label, |code, msg| {
                        sink.push(order, sid, yid, code, msg)
                    });
                }
            }
            if !valid {
                continue;
            }
            match expand_synset(synset, sentence, cfg, lim) {
                Ok(set) => {
                    for key in set.keys() {
                        keys.entry(key.clone()).or_default().insert(ypos);
                    }
                }
                Err(ExpandError::VariantLimitExceeded { count, limit }) => sink.push(
                    order,
                    sid,
                    yid,
                    DiagnosticCode::VariantLimitExceeded,
                    format!("synset expands to {count} variants (limit {limit}); overlap check skipped"),
                ),
                Err(ExpandError::InvalidTemplate(e)) => sink.push(
                    order,
                    sid,
                    yid,
                    DiagnosticCode::EmptySlot,
                    e.to_string(),
                ),
            }
        }

        // one diagnostic per (synset, other synset) pair that shares a triple
        let mut shared: BTreeMap<(usize, usize), &TripleKey> = BTreeMap::new();
        for (key, ys) in &keys {
            for &a in ys {
                for &b in ys {
                    if a != b {
                        shared.entry((a, b)).or_insert(key);
                    }
                }
            }
        }
        for ((a, b), key) in shared {
            sink.push(
                (spos, a + 1),
                sid,
                Some(&synsets[a].id),
                DiagnosticCode::GoldOverlap,
                format!("shares triple {key} with synset {}", synsets[b].id),
            );
        }
    }
}

/// Checks a benchmark against the annotation guidelines. Never fails; an
/// empty result means the gold is clean.
pub fn lint_gold(g: &GoldBenchmark, cfg: &NormalizationConfig) -> Vec<Diagnostic> {
    let mut sink = DiagnosticSink::default();
    lint_into(g, cfg, &ExpansionLimits::default(), &mut sink);
    sink.finish()
}

/// Lints hand-written gold TSV against tagged sentences. Rows that do not
/// parse become diagnostics instead of aborting, so one run reports every
/// problem. Only a structurally broken file (wrong field count, bad ids) is
/// an error.
pub fn lint_gold_tsv(
    bytes: &[u8],
    sentences: &[TaggedSentence],
    cfg: &NormalizationConfig,
) -> Result<Vec<Diagnostic>, FormatError> {
    let positions: BTreeMap<&str, usize> =
        sentences.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
    let mut sink = DiagnosticSink::default();
    let mut synsets: BTreeMap<String, Vec<FactSynset>> = BTreeMap::new();
    let mut failed: HashSet<(String, String)> = HashSet::new();
    let mut unknown_order: Vec<String> = Vec::new();

    for row in read_gold_tsv(bytes)? {
        let Some(&spos) = positions.get(row.sentence_id.as_str()) else {
            if !unknown_order.contains(&row.sentence_id) {
                unknown_order.push(row.sentence_id.clone());
            }
            let rank = unknown_order.iter().position(|s| *s == row.sentence_id).unwrap_or(0);
            sink.push(
                (usize::MAX - unknown_order.len() + rank, 0),
                &row.sentence_id,
                Some(&row.synset_id),
                DiagnosticCode::UnknownSentence,
                format!("line {}: sentence is not in the sentence file", row.line),
            );
            continue;
        };
        let list = synsets.entry(row.sentence_id.clone()).or_default();
        let ypos = match list.iter().position(|y| y.id == row.synset_id) {
            Some(p) => p,
            None => {
                list.push(FactSynset::new(row.synset_id.clone(), vec![]));
                list.len() - 1
            }
        };
        match parse_triple_shorthand(&row.subject, &row.predicate, &row.object, &sentences[spos], cfg) {
            Ok(t) => list[ypos].triples.push(t),
            Err((slot, e)) => {
                let code = match e {
                    ShorthandError::TokenNotInSentence { .. } => DiagnosticCode::ExplicitnessViolation,
                    ShorthandError::AllOptional { .. } => DiagnosticCode::AllOptionalAlternative,
                    ShorthandError::Empty | ShorthandError::EmptyAlternative { .. } => DiagnosticCode::EmptySlot,
                    _ => DiagnosticCode::MalformedShorthand,
                };
                sink.push(
                    (spos, ypos + 1),
                    &row.sentence_id,
                    Some(&row.synset_id),
                    code,
                    format!("line {}: {slot}: {e}", row.line),
                );
                failed.insert((row.sentence_id.clone(), row.synset_id.clone()));
            }
        }
    }

    let g = GoldBenchmark::new(sentences.to_vec(), synsets);
    let mut rest = DiagnosticSink::default();
    lint_into(&g, cfg, &ExpansionLimits::default(), &mut rest);
    for (order, d) in rest.items {
        let key = (d.sentence_id.clone(), d.synset_id.clone().unwrap_or_default());
        // a synset whose rows all failed is already reported
        if d.code == DiagnosticCode::EmptySynset && failed.contains(&key) {
            continue;
        }
        sink.items.push((order, d));
    }
    Ok(sink.finish())
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}
