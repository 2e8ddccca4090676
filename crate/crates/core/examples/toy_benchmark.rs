//! Full pipeline on the bundled ten-sentence benchmark and fake system.

use factbench::fixtures;
use factbench::normalize::NormalizationConfig;
use factbench::scoring::{format_score, lint_gold, score_fact_based, UnknownSentencePolicy};
use factbench::shorthand::ExpansionLimits;

fn main() {
    let gold = fixtures::toy_benchmark();
    let system = fixtures::toy_system();
    let cfg = NormalizationConfig::default();

    let notes = lint_gold(&gold, &cfg);
    println!("{} sentences, {} synsets, {} lint notes", gold.sentences.len(), gold.synset_count(), notes.len());

    let r = score_fact_based(&system, &gold, &cfg, &ExpansionLimits::default(), UnknownSentencePolicy::Strict)
        .unwrap();
    println!("{:<5} {:>3} {:>3} {:>3}", "id", "tp", "fp", "fn");
    for (sid, c) in &r.per_sentence {
        println!("{sid:<5} {:>3} {:>3} {:>3}", c.tp, c.fp, c.fn_);
    }
    println!("P {} R {} F1 {}", format_score(r.precision), format_score(r.recall), format_score(r.f1));
}
