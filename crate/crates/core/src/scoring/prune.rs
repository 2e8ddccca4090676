//! Pruning of system extractions for named-entity-centric evaluation.
//!
//! An extraction is kept only when both its subject and its object contain
//! (as a contiguous run of normalized tokens) one of the sentence's target
//! arguments.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{split_words, GoldBenchmark, Ner, SystemExtraction, TaggedSentence};
use crate::normalize::{normalize_slot, NormalizationConfig};
use crate::scoring::ScoreError;
use crate::shorthand::{build_gold_index, ExpansionLimits};

/// What counts as an argument an extraction must contain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContainmentTarget {
    /// Whole subject and object strings of expanded gold triples.
    #[default]
    GoldArguments,
    /// Maximal runs of NER-labeled tokens in the sentence.
    NerSpans,
}

fn ner_spans(sentence: &TaggedSentence, cfg: &NormalizationConfig) -> BTreeSet<Vec<String>> {
    let mut spans = BTreeSet::new();
    let mut current: Vec<&str> = Vec::new();
    for tok in &sentence.tokens {
        if tok.ner != Ner::None {
            current.push(&tok.text);
        } else if !current.is_empty() {
            spans.insert(normalize_slot(&current, cfg));
            current.clear();
        }
    }
    if !current.is_empty() {
        spans.insert(normalize_slot(&current, cfg));
    }
    spans
}

/// Per-sentence argument sets used by [`prune_ne_centric`].
pub fn argument_targets(
    g: &GoldBenchmark,
    cfg: &NormalizationConfig,
    lim: &ExpansionLimits,
    target: ContainmentTarget,
) -> Result<BTreeMap<String, BTreeSet<Vec<String>>>, ScoreError> {
    let mut out = BTreeMap::new();
    match target {
        ContainmentTarget::GoldArguments => {
            let index = build_gold_index(g, cfg, lim)?;
            for sid in index.sentence_ids() {
                let mut args = BTreeSet::new();
                for key in index.keys(sid) {
                    let slots: Vec<Vec<&str>> = key.slots().collect();
                    args.insert(slots[0].iter().map(|s| s.to_string()).collect());
                    args.insert(slots[2].iter().map(|s| s.to_string()).collect());
                }
                out.insert(sid.to_owned(), args);
            }
        }
        ContainmentTarget::NerSpans => {
            for s in &g.sentences {
                out.insert(s.id.clone(), ner_spans(s, cfg));
            }
        }
    }
    Ok(out)
}

fn contains_any(words: &[String], targets: &BTreeSet<Vec<String>>) -> bool {
    targets
        .iter()
        .any(|t| !t.is_empty() && words.windows(t.len()).any(|w| w == t.as_slice()))
}

/// Keeps the extractions whose subject and object both contain a target
/// argument of their sentence. Input order is preserved.
pub fn prune_ne_centric(
    extractions: &[SystemExtraction],
    g: &GoldBenchmark,
    cfg: &NormalizationConfig,
    lim: &ExpansionLimits,
    target: ContainmentTarget,
) -> Result<Vec<SystemExtraction>, ScoreError> {
    let targets = argument_targets(g, cfg, lim, target)?;
    let empty = BTreeSet::new();
    Ok(extractions
        .iter()
        .filter(|e| {
            let args = targets.get(&e.sentence_id).unwrap_or(&empty);
            let subject = normalize_slot(&split_words(&e.subject), cfg);
            let object = normalize_slot(&split_words(&e.object), cfg);
            contains_any(&subject, args) && contains_any(&object, args)
        })
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn run(xs: &[SystemExtraction], g: &GoldBenchmark, target: ContainmentTarget) -> Vec<SystemExtraction> {
        prune_ne_centric(xs, g, &NormalizationConfig::default(), &ExpansionLimits::default(), target)
            .unwrap()
    }

    #[test]
    fn keeps_extraction_between_gold_entities() {
        let g = fixtures::pichai_benchmark();
        let xs = fixtures::pichai_extractions();
        let kept = run(&xs, &g, ContainmentTarget::GoldArguments);
        assert_eq!(kept, vec![xs[0].clone()]);
    }

    #[test]
    fn containment_is_contiguous() {
        let g = fixtures::pichai_benchmark();
        let xs = vec![
            SystemExtraction::new("ne1", "CEO Sundar Pichai", "runs", "all of Google").unwrap(),
            SystemExtraction::new("ne1", "Sundar the Pichai", "runs", "Google").unwrap(),
        ];
        let kept = run(&xs, &g, ContainmentTarget::GoldArguments);
        assert_eq!(kept, vec![xs[0].clone()]);
    }

    #[test]
    fn sentence_without_gold_drops_everything() {
        let mut g = fixtures::pichai_benchmark();
        g.synsets.clear();
        let kept = run(&fixtures::pichai_extractions(), &g, ContainmentTarget::GoldArguments);
        assert!(kept.is_empty());
    }

    #[test]
    fn ner_span_targets() {
        let g = fixtures::pichai_benchmark();
        let targets = argument_targets(
            &g,
            &NormalizationConfig::default(),
            &ExpansionLimits::default(),
            ContainmentTarget::NerSpans,
        )
        .unwrap();
        let spans: Vec<String> = targets["ne1"].iter().map(|s| s.join(" ")).collect();
        // the capitalization heuristic also marks "CEO"
        assert_eq!(spans, vec!["ceo", "google", "sundar pichai"]);
        let kept = run(&fixtures::pichai_extractions(), &g, ContainmentTarget::NerSpans);
        assert_eq!(kept.len(), 1);
    }

    #[test]
    fn pruning_is_idempotent() {
        let g = fixtures::pichai_benchmark();
        let once = run(&fixtures::pichai_extractions(), &g, ContainmentTarget::GoldArguments);
        let twice = run(&once, &g, ContainmentTarget::GoldArguments);
        assert_eq!(once, twice);
    }
}
