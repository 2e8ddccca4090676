//! Parse a shorthand triple and list every surface realization it accepts.
//!
//!     cargo run -p factbench --example expand_shorthand

use factbench::fixtures;
use factbench::normalize::NormalizationConfig;
use factbench::shorthand::{expand_triple, parse_triple_shorthand, variant_count, ExpansionLimits};

fn main() {
    let sentence = fixtures::table_sentence();
    let cfg = NormalizationConfig::default();
    let template = parse_triple_shorthand(
        "Sen. Mitchell | he",
        "is confident he has sufficient votes to block",
        "[such] [a] measure",
        &sentence,
        &cfg,
    )
    .expect("all words occur in the sentence");

    println!("sentence: {}", sentence.raw);
    println!("variants before dedup: {}", variant_count(&template));
    let set = expand_triple(&template, &sentence, &cfg, &ExpansionLimits::default()).unwrap();
    for t in set.triples() {
        println!("  {t}");
    }
    println!("{} distinct triples", set.len());

    // words that are not in the sentence are rejected
    let err = parse_triple_shorthand("Senator Mitchell", "is", "confident", &sentence, &cfg).unwrap_err();
    println!("error in {}: {}", err.0, err.1);
}
