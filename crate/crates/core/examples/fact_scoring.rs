//! Exact fact-level scoring of four extractions against four fact synsets.

use factbench::fixtures;
use factbench::normalize::NormalizationConfig;
use factbench::scoring::{format_score, match_extraction, score_fact_based, UnknownSentencePolicy};
use factbench::shorthand::{build_gold_index, ExpansionLimits};

fn main() {
    let gold = fixtures::table_benchmark();
    let extractions = fixtures::table_extractions();
    let cfg = NormalizationConfig::default();
    let lim = ExpansionLimits::default();

    let index = build_gold_index(&gold, &cfg, &lim).unwrap();
    for (i, e) in extractions.iter().enumerate() {
        let hits = match_extraction(e, &index, &cfg).unwrap();
        println!("t{} {:<60} -> {:?}", i + 1, e.to_triple().unwrap().to_string(), hits);
    }

    let r = score_fact_based(&extractions, &gold, &cfg, &lim, UnknownSentencePolicy::Strict).unwrap();
    println!("tp {} fp {} fn {}", r.tp, r.fp, r.fn_);
    println!("P {} R {} F1 {}", format_score(r.precision), format_score(r.recall), format_score(r.f1));
}
