//! Exact fact-level matching.
//!
//! A synset is a true positive when at least one extraction matches any of
//! its realizations, and it counts once no matter how many extractions hit
//! it. An extraction matching no synset is a false positive. Synsets that
//! nothing matched are false negatives.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{GoldBenchmark, SystemExtraction};
use crate::normalize::{triple_key, NormalizationConfig};
use crate::scoring::{f1, ratio, ScoreError};
use crate::shorthand::{build_gold_index, ExpansionLimits, GoldIndex};

/// How extractions for sentences absent from the gold are treated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnknownSentencePolicy {
    #[default]
    Strict,
    /// Count each such extraction as a false positive.
    #[serde(rename = "fp")]
    FalsePositive,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Counts {
    fn add(&mut self, other: Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Match {
    pub extraction: usize,
    pub sentence_id: String,
    pub synset_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_sentence: BTreeMap<String, Counts>,
    pub matched: Vec<Match>,
}

impl ScoreReport {
    fn from_counts(per_sentence: BTreeMap<String, Counts>, matched: Vec<Match>) -> Self {
        let mut total = Counts::default();
        for c in per_sentence.values() {
            total.add(*c);
        }
        let precision = ratio(total.tp, total.tp + total.fp);
        let recall = ratio(total.tp, total.tp + total.fn_);
        ScoreReport {
            tp: total.tp,
            fp: total.fp,
            fn_: total.fn_,
            precision,
            recall,
            f1: f1(precision, recall),
            per_sentence,
            matched,
        }
    }
}

/// Synset ids whose expansion contains the extraction, in benchmark order.
pub fn match_extraction<'a>(
    e: &SystemExtraction,
    index: &'a GoldIndex,
    cfg: &NormalizationConfig,
) -> Result<Vec<&'a str>, ScoreError> {
    if !index.contains_sentence(&e.sentence_id) {
        return Err(ScoreError::UnknownSentence(e.sentence_id.clone()));
    }
    let key = triple_key(&e.to_triple()?, cfg);
    Ok(index.lookup(&e.sentence_id, &key).unwrap_or_default())
}

pub fn score_fact_based(
    extractions: &[SystemExtraction],
    g: &GoldBenchmark,
    cfg: &NormalizationConfig,
    lim: &ExpansionLimits,
    unknown: UnknownSentencePolicy,
) -> Result<ScoreReport, ScoreError> {
    let index = build_gold_index(g, cfg, lim)?;
    score_with_index(extractions, &index, unknown)
}

/// Fact-based scoring against a prebuilt index, using the index's
/// normalization.
pub fn score_with_index(
    extractions: &[SystemExtraction],
    index: &GoldIndex,
    unknown: UnknownSentencePolicy,
) -> Result<ScoreReport, ScoreError> {
    let cfg = *index.config();
    let mut covered: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut fp: BTreeMap<String, usize> = BTreeMap::new();
    let mut matched = Vec::new();

    for (i, e) in extractions.iter().enumerate() {
        let hits = match match_extraction(e, index, &cfg) {
            Ok(hits) => hits,
            Err(ScoreError::UnknownSentence(_)) if unknown == UnknownSentencePolicy::FalsePositive => {
                Vec::new()
            }
            Err(err) => return Err(err),
        };
        if hits.is_empty() {
            *fp.entry(e.sentence_id.clone()).or_default() += 1;
        }
        for synset in hits {
            covered.entry(e.sentence_id.as_str()).or_default().insert(synset);
            matched.push(Match {
                extraction: i,
                sentence_id: e.sentence_id.clone(),
                synset_id: synset.to_owned(),
            });
        }
    }

    let mut per_sentence: BTreeMap<String, Counts> = BTreeMap::new();
    for (sid, fp) in fp {
        per_sentence.entry(sid).or_default().fp = fp;
    }
    for sid in index.sentence_ids() {
        let total = index.synset_ids(sid).len();
        let tp = covered.get(sid).map_or(0, BTreeSet::len);
        let c = per_sentence.entry(sid.to_owned()).or_default();
        c.tp = tp;
        c.fn_ = total - tp;
    }
    Ok(ScoreReport::from_counts(per_sentence, matched))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ext(s: &str, p: &str, o: &str) -> SystemExtraction {
        SystemExtraction::new("sent1", s, p, o).unwrap()
    }

    fn index() -> GoldIndex {
        build_gold_index(
            &fixtures::table_benchmark(),
            &NormalizationConfig::default(),
            &ExpansionLimits::default(),
        )
        .unwrap()
    }

    #[test]
    fn table_extractions_match_fact_column() {
        let idx = index();
        let cfg = NormalizationConfig::default();
        let got: Vec<Vec<&str>> = fixtures::table_extractions()
            .iter()
            .map(|e| match_extraction(e, &idx, &cfg).unwrap())
            .collect();
        assert_eq!(got, vec![vec![], vec![], vec![], vec!["f2"]]);
    }

    #[test]
    fn unknown_sentence_is_an_error() {
        let idx = index();
        let e = SystemExtraction::new("nope", "a", "b", "c").unwrap();
        assert_eq!(
            match_extraction(&e, &idx, &NormalizationConfig::default()),
            Err(ScoreError::UnknownSentence("nope".into()))
        );
    }

    #[test]
    fn table_aggregate() {
        let r = score_fact_based(
            &fixtures::table_extractions(),
            &fixtures::table_benchmark(),
            &NormalizationConfig::default(),
            &ExpansionLimits::default(),
            UnknownSentencePolicy::Strict,
        )
        .unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (1, 3, 3));
        assert_eq!((r.precision, r.recall, r.f1), (0.25, 0.25, 0.25));
        assert_eq!(r.per_sentence["sent1"], Counts { tp: 1, fp: 3, fn_: 3 });
        assert_eq!(
            r.matched,
            vec![Match {
                extraction: 3,
                sentence_id: "sent1".into(),
                synset_id: "f2".into()
            }]
        );
    }

    #[test]
    fn synset_rewarded_once() {
        let xs = vec![
            ext("Sen. Mitchell", "is confident he has", "sufficient votes"),
            ext("he", "is confident he has", "sufficient votes"),
        ];
        let r = score_fact_based(
            &xs,
            &fixtures::table_benchmark(),
            &NormalizationConfig::default(),
            &ExpansionLimits::default(),
            UnknownSentencePolicy::Strict,
        )
        .unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (1, 0, 3));
        assert_eq!(r.matched.len(), 2);
    }

    #[test]
    fn empty_extractions() {
        let r = score_fact_based(
            &[],
            &fixtures::table_benchmark(),
            &NormalizationConfig::default(),
            &ExpansionLimits::default(),
            UnknownSentencePolicy::Strict,
        )
        .unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (0, 0, 4));
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn unknown_sentence_policy() {
        let xs = vec![SystemExtraction::new("elsewhere", "a", "b", "c").unwrap()];
        let g = fixtures::table_benchmark();
        let cfg = NormalizationConfig::default();
        let lim = ExpansionLimits::default();
        assert!(score_fact_based(&xs, &g, &cfg, &lim, UnknownSentencePolicy::Strict).is_err());
        let r = score_fact_based(&xs, &g, &cfg, &lim, UnknownSentencePolicy::FalsePositive).unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (0, 1, 4));
        assert_eq!(r.per_sentence["elsewhere"].fp, 1);
    }

    #[test]
    fn case_sensitivity_changes_matching() {
        let xs = vec![ext("SEN. MITCHELL", "is confident he has", "sufficient votes")];
        let g = fixtures::table_benchmark();
        let lim = ExpansionLimits::default();
        let folded = score_fact_based(&xs, &g, &NormalizationConfig::default(), &lim, Default::default()).unwrap();
        assert_eq!(folded.tp, 1);
        let strict =
            score_fact_based(&xs, &g, &NormalizationConfig::case_sensitive(), &lim, Default::default()).unwrap();
        assert_eq!((strict.tp, strict.fp), (0, 1));
    }

    #[test]
    fn report_serializes_fn_field() {
        let r = score_fact_based(
            &[],
            &fixtures::table_benchmark(),
            &NormalizationConfig::default(),
            &ExpansionLimits::default(),
            UnknownSentencePolicy::Strict,
        )
        .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["fn"], 4);
        assert_eq!(v["per_sentence"]["sent1"]["fn"], 4);
    }
}
