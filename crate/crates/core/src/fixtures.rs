//! Small bundled datasets used by the tests and examples.
//!
//! `table_*` is the single-sentence Mitchell example with four fact synsets
//! and four system extractions. `toy_*` is a ten-sentence benchmark with a
//! fake system output. `pichai_*` is a one-sentence entity-centric case.

use std::collections::BTreeMap;

use crate::io::{import_gold_tsv, load_sentences, load_system_extractions, AnnotationState};
use crate::model::{ConcreteTriple, FactSynset, GoldBenchmark, SystemExtraction, TaggedSentence};
use crate::normalize::NormalizationConfig;
use crate::shorthand::parse_triple_shorthand;
use crate::tagger::{tag, TaggerConfig};

pub const TABLE_SENTENCES_JSON: &str = include_str!("../data/table/sentences.json");
pub const TABLE_GOLD_TSV: &str = include_str!("../data/table/gold.tsv");
pub const TABLE_EXTRACTIONS_TSV: &str = include_str!("../data/table/extractions.tsv");
pub const TABLE_CARB_GOLD_TSV: &str = include_str!("../data/table/carb_gold.tsv");

pub const TOY_SENTENCES_JSON: &str = include_str!("../data/toy/sentences.json");
pub const TOY_GOLD_TSV: &str = include_str!("../data/toy/gold.tsv");
pub const TOY_SYSTEM_TSV: &str = include_str!("../data/toy/system.tsv");

/// Hand-computed fact-based counts of the toy system: (tp, fp, fn).
pub const TOY_COUNTS: (usize, usize, usize) = (9, 4, 5);

/// Tags every sentence of a sentence file with the default tagger.
pub fn tag_all(sentences_json: &str) -> Vec<TaggedSentence> {
    let cfg = TaggerConfig::default();
    load_sentences(sentences_json.as_bytes())
        .expect("bundled sentences parse")
        .into_iter()
        .map(|s| tag(&s.text, &s.id, &cfg).expect("bundled sentence tags"))
        .collect()
}

pub fn table_sentence() -> TaggedSentence {
    tag_all(TABLE_SENTENCES_JSON).remove(0)
}

pub fn table_benchmark() -> GoldBenchmark {
    import_gold_tsv(
        TABLE_GOLD_TSV.as_bytes(),
        &[table_sentence()],
        &NormalizationConfig::default(),
    )
    .expect("bundled gold parses")
}

pub fn table_state() -> AnnotationState {
    let mut st = AnnotationState::from_gold(table_benchmark());
    st.meta.annotator = Some("fixture".into());
    st
}

/// Extractions t1..t4, in order.
pub fn table_extractions() -> Vec<SystemExtraction> {
    load_system_extractions(TABLE_EXTRACTIONS_TSV.as_bytes()).expect("bundled extractions parse")
}

/// The single reference extraction used for token-overlap scoring.
pub fn table_carb_gold() -> ConcreteTriple {
    load_system_extractions(TABLE_CARB_GOLD_TSV.as_bytes()).expect("bundled gold parses")[0]
        .to_triple()
        .expect("non-empty slots")
}

pub fn toy_benchmark() -> GoldBenchmark {
    import_gold_tsv(
        TOY_GOLD_TSV.as_bytes(),
        &tag_all(TOY_SENTENCES_JSON),
        &NormalizationConfig::default(),
    )
    .expect("bundled gold parses")
}

pub fn toy_system() -> Vec<SystemExtraction> {
    load_system_extractions(TOY_SYSTEM_TSV.as_bytes()).expect("bundled extractions parse")
}

pub fn pichai_benchmark() -> GoldBenchmark {
    let cfg = NormalizationConfig::default();
    let s = tag("Sundar Pichai is the CEO of Google.", "ne1", &TaggerConfig::default()).expect("tags");
    let t = parse_triple_shorthand("Sundar Pichai", "CEO", "Google", &s, &cfg).expect("aligns");
    let mut synsets = BTreeMap::new();
    synsets.insert("ne1".to_string(), vec![FactSynset::new("f1", vec![t])]);
    GoldBenchmark::new(vec![s], synsets)
}

pub fn pichai_extractions() -> Vec<SystemExtraction> {
    vec![
        SystemExtraction::new("ne1", "Sundar Pichai", "is CEO of", "Google").expect("valid"),
        SystemExtraction::new("ne1", "He", "works at", "Google").expect("valid"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_sentence_tokens() {
        let s = table_sentence();
        assert_eq!(s.len(), 17);
        assert_eq!(s.token_text(0), Some("Sen."));
        assert_eq!(s.token_text(4), Some("he"));
        assert_eq!(s.token_text(16), Some("."));
    }

    #[test]
    fn bundled_sets_are_valid() {
        table_benchmark().validate().unwrap();
        toy_benchmark().validate().unwrap();
        pichai_benchmark().validate().unwrap();
        assert_eq!(table_benchmark().synset_count(), 4);
        assert_eq!(toy_benchmark().synset_count(), 14);
        assert_eq!(toy_system().len(), 14);
    }
}
