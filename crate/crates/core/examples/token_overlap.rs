//! Lenient token-overlap scores for the same four extractions. Every one of
//! them looks good here, yet only t4 states a complete fact.

use std::collections::BTreeMap;

use factbench::fixtures;
use factbench::normalize::NormalizationConfig;
use factbench::scoring::overlap::extraction_token_overlap;
use factbench::scoring::{format_score, score_token_overlap};

fn main() {
    let gold = fixtures::table_carb_gold();
    let cfg = NormalizationConfig::default();
    println!("gold: {gold}");
    for (i, e) in fixtures::table_extractions().iter().enumerate() {
        let s = extraction_token_overlap(e, &gold, &cfg).unwrap();
        println!("t{}  P {}  R {}", i + 1, format_score(s.precision), format_score(s.recall));
    }

    let mut by_sentence = BTreeMap::new();
    by_sentence.insert("sent1".to_string(), vec![gold]);
    let r = score_token_overlap(&fixtures::table_extractions(), &by_sentence, &cfg).unwrap();
    println!(
        "dataset (one gold, four extractions): P {} R {} F1 {}",
        format_score(r.precision),
        format_score(r.recall),
        format_score(r.f1)
    );
}
