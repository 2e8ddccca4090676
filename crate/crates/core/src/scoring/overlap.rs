//! Lenient token-overlap scoring between system and gold triples.
//!
//! Per slot, the matched count is the size of the multiset intersection of
//! normalized tokens. Pair precision divides the summed matches by the
//! system triple's length, pair recall by the gold triple's length.
//!
//! Dataset scores come from a one-to-one assignment built greedily by
//! descending pair F1 within each sentence. This is an approximation of the
//! reference CaRB implementation, not a port of it.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::model::{ConcreteTriple, GoldBenchmark, SlotName, SlotTemplate, SystemExtraction, TaggedSentence};
use crate::normalize::{normalize_slot, NormalizationConfig};
use crate::scoring::{f1, ScoreError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub precision: f64,
    pub recall: f64,
}

impl PairScore {
    pub fn f1(&self) -> f64 {
        f1(self.precision, self.recall)
    }
}

fn multiset_intersection(a: &[String], b: &[String]) -> usize {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for w in b {
        *counts.entry(w.as_str()).or_default() += 1;
    }
    a.iter()
        .filter(|w| match counts.get_mut(w.as_str()) {
            Some(n) if *n > 0 => {
                *n -= 1;
                true
            }
            _ => false,
        })
        .count()
}

/// Token-wise precision and recall of one system triple against one gold
/// triple.
pub fn pair_token_overlap(
    system: &ConcreteTriple,
    gold: &ConcreteTriple,
    cfg: &NormalizationConfig,
) -> PairScore {
    let (mut matched, mut sys_len, mut gold_len) = (0usize, 0usize, 0usize);
    for name in SlotName::ALL {
        let s = normalize_slot(system.slot(name), cfg);
        let g = normalize_slot(gold.slot(name), cfg);
        matched += multiset_intersection(&s, &g);
        sys_len += s.len();
        gold_len += g.len();
    }
    PairScore {
        precision: matched as f64 / sys_len as f64,
        recall: matched as f64 / gold_len as f64,
    }
}

/// [`pair_token_overlap`] for a free-text system extraction.
pub fn extraction_token_overlap(
    e: &SystemExtraction,
    gold: &ConcreteTriple,
    cfg: &NormalizationConfig,
) -> Result<PairScore, ScoreError> {
    Ok(pair_token_overlap(&e.to_triple()?, gold, cfg))
}

fn longest_words(slot: &SlotTemplate, sentence: &TaggedSentence) -> Vec<String> {
    slot.alternatives
        .first()
        .into_iter()
        .flatten()
        .filter_map(|t| sentence.token_text(t.token_index).map(str::to_owned))
        .collect()
}

/// One reference triple per fact synset, for token-overlap scoring against
/// fact-synset gold: the first template's first alternatives with every
/// optional token kept. Synsets with no usable template are skipped.
pub fn synset_reference_triples(g: &GoldBenchmark) -> BTreeMap<String, Vec<ConcreteTriple>> {
    let mut out = BTreeMap::new();
    for (sentence, synsets) in g.iter() {
        let triples: Vec<ConcreteTriple> = synsets
            .iter()
            .filter_map(|y| y.triples.first())
            .filter_map(|t| {
                ConcreteTriple::new(
                    longest_words(&t.subject, sentence),
                    longest_words(&t.predicate, sentence),
                    longest_words(&t.object, sentence),
                )
                .ok()
            })
            .collect();
        if !triples.is_empty() {
            out.insert(sentence.id.clone(), triples);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub extraction: usize,
    pub sentence_id: String,
    pub gold: usize,
    pub score: PairScore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub extraction_count: usize,
    pub gold_count: usize,
    pub assignments: Vec<Assignment>,
}

/// Dataset-level token-overlap score.
///
/// Precision averages assigned pair precisions over all extractions, recall
/// averages assigned pair recalls over all gold triples. Unassigned
/// extractions and gold triples contribute zero.
pub fn score_token_overlap(
    extractions: &[SystemExtraction],
    gold: &BTreeMap<String, Vec<ConcreteTriple>>,
    cfg: &NormalizationConfig,
) -> Result<OverlapReport, ScoreError> {
    let mut by_sentence: BTreeMap<&str, Vec<(usize, ConcreteTriple)>> = BTreeMap::new();
    for (i, e) in extractions.iter().enumerate() {
        by_sentence
            .entry(e.sentence_id.as_str())
            .or_default()
            .push((i, e.to_triple()?));
    }

    let mut assignments = Vec::new();
    for (sid, system) in &by_sentence {
        let Some(gold_triples) = gold.get(*sid) else {
            continue;
        };
        let mut pairs = Vec::new();
        for (ei, st) in system {
            for (gi, gt) in gold_triples.iter().enumerate() {
                let score = pair_token_overlap(st, gt, cfg);
                if score.f1() > 0.0 {
                    pairs.push((*ei, gi, score));
                }
            }
        }
        pairs.sort_by(|a, b| {
            b.2.f1()
                .total_cmp(&a.2.f1())
                .then(a.0.cmp(&b.0))
                .then(a.1.cmp(&b.1))
        });
        let mut used_ext = HashSet::new();
        let mut used_gold = vec![false; gold_triples.len()];
        let mut sentence_assignments = Vec::new();
        for (ei, gi, score) in pairs {
            if used_gold[gi] || !used_ext.insert(ei) {
                continue;
            }
            used_gold[gi] = true;
            sentence_assignments.push(Assignment {
                extraction: ei,
                sentence_id: (*sid).to_owned(),
                gold: gi,
                score,
            });
        }
        sentence_assignments.sort_by_key(|a| a.extraction);
        assignments.extend(sentence_assignments);
    }

    let gold_count: usize = gold.values().map(Vec::len).sum();
    let p_sum: f64 = assignments.iter().map(|a| a.score.precision).sum();
    let r_sum: f64 = assignments.iter().map(|a| a.score.recall).sum();
    let precision = if extractions.is_empty() {
        0.0
    } else {
        p_sum / extractions.len() as f64
    };
    let recall = if gold_count == 0 {
        0.0
    } else {
        r_sum / gold_count as f64
    };
    Ok(OverlapReport {
        precision,
        recall,
        f1: f1(precision, recall),
        extraction_count: extractions.len(),
        gold_count,
        assignments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn t(s: &str, p: &str, o: &str) -> ConcreteTriple {
        ConcreteTriple::from_strs(s, p, o).unwrap()
    }

    #[test]
    fn table_pairs() {
        let gold = fixtures::table_carb_gold();
        let cfg = NormalizationConfig::default();
        // gold has 2 + 4 + 10 = 16 tokens; t1..t4 share 7, 8, 9, 8 of them
        let expected = [7.0 / 16.0, 8.0 / 16.0, 9.0 / 16.0, 8.0 / 16.0];
        for (e, r) in fixtures::table_extractions().iter().zip(expected) {
            let s = extraction_token_overlap(e, &gold, &cfg).unwrap();
            assert_eq!(s.precision, 1.0);
            assert!((s.recall - r).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_is_perfect() {
        let g = fixtures::table_carb_gold();
        let s = pair_token_overlap(&g, &g, &NormalizationConfig::default());
        assert_eq!((s.precision, s.recall), (1.0, 1.0));
    }

    #[test]
    fn repeated_words_are_not_over_credited() {
        let cfg = NormalizationConfig::default();
        let s = pair_token_overlap(&t("a a a", "b", "c"), &t("a", "b", "c"), &cfg);
        assert_eq!(s.precision, 3.0 / 5.0);
        assert_eq!(s.recall, 1.0);
    }

    #[test]
    fn tokens_count_per_slot() {
        // "he" in the wrong slot earns nothing
        let cfg = NormalizationConfig::default();
        let s = pair_token_overlap(&t("he", "x", "y"), &t("z", "he", "w"), &cfg);
        assert_eq!((s.precision, s.recall), (0.0, 0.0));
    }

    #[test]
    fn single_extraction_dataset() {
        let mut gold = BTreeMap::new();
        gold.insert("sent1".to_string(), vec![fixtures::table_carb_gold()]);
        let t4 = fixtures::table_extractions()[3].clone();
        let r = score_token_overlap(&[t4], &gold, &NormalizationConfig::default()).unwrap();
        assert_eq!(r.precision, 1.0);
        assert_eq!(r.recall, 0.5);
    }

    #[test]
    fn system_equal_to_gold() {
        let mut gold = BTreeMap::new();
        gold.insert("s".to_string(), vec![t("a b", "c", "d"), t("e", "f g", "h")]);
        let xs = vec![
            SystemExtraction::new("s", "e", "f g", "h").unwrap(),
            SystemExtraction::new("s", "a b", "c", "d").unwrap(),
        ];
        let r = score_token_overlap(&xs, &gold, &NormalizationConfig::default()).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
        assert_eq!(r.assignments[0].gold, 1);
    }

    #[test]
    fn unassigned_extraction_still_counts() {
        let mut gold = BTreeMap::new();
        gold.insert("s".to_string(), vec![t("a", "b", "c d")]);
        let xs = vec![
            SystemExtraction::new("s", "a", "b", "c").unwrap(),
            SystemExtraction::new("s", "a", "b", "c d").unwrap(),
        ];
        let r = score_token_overlap(&xs, &gold, &NormalizationConfig::default()).unwrap();
        // second extraction is the perfect pair; first is left unassigned
        assert_eq!(r.assignments.len(), 1);
        assert_eq!(r.assignments[0].extraction, 1);
        assert_eq!(r.precision, 0.5);
        assert_eq!(r.recall, 1.0);
    }

    #[test]
    fn ties_go_to_lower_extraction_index() {
        let mut gold = BTreeMap::new();
        gold.insert("s".to_string(), vec![t("a", "b", "c")]);
        let xs = vec![
            SystemExtraction::new("s", "a", "b", "c").unwrap(),
            SystemExtraction::new("s", "a", "b", "c").unwrap(),
        ];
        let r = score_token_overlap(&xs, &gold, &NormalizationConfig::default()).unwrap();
        assert_eq!(r.assignments.len(), 1);
        assert_eq!(r.assignments[0].extraction, 0);
    }

    #[test]
    fn reference_triples_keep_optional_tokens() {
        let refs = synset_reference_triples(&fixtures::table_benchmark());
        let got: Vec<String> = refs["sent1"].iter().map(|t| t.to_string()).collect();
        assert_eq!(
            got,
            vec![
                "(\"Sen. Mitchell\"; \"is\"; \"confident\")",
                "(\"Sen. Mitchell\"; \"is confident he has\"; \"sufficient votes\")",
                "(\"Sen. Mitchell\"; \"is confident he has sufficient votes to block\"; \"such a measure\")",
                "(\"Sen. Mitchell\"; \"is confident he has sufficient votes to block such a measure with\"; \"procedural actions\")",
            ]
        );
    }

    #[test]
    fn empty_inputs() {
        let r = score_token_overlap(&[], &BTreeMap::new(), &NormalizationConfig::default()).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
    }
}
