//! Check gold annotations for guideline violations.

use factbench::fixtures;
use factbench::normalize::NormalizationConfig;
use factbench::scoring::{lint_gold, lint_gold_tsv};

fn main() {
    let cfg = NormalizationConfig::default();

    println!("== bundled toy gold");
    for d in lint_gold(&fixtures::toy_benchmark(), &cfg) {
        println!("{:?} {} {:?} {:?}: {}", d.severity, d.sentence_id, d.synset_id, d.code, d.message);
    }

    println!("== hand-written TSV with mistakes");
    let sentences = [fixtures::table_sentence()];
    let tsv = "sent1\tf1\tSen. Mitchell\tis\tconfident\n\
               sent1\tf2\tSen. Mitchell\tis\tconfident\n\
               sent1\tf3\tSenator Mitchell\tis\tconfident\n\
               sent1\tf4\the\tis confident he has\t[sufficient] [votes]\n";
    for d in lint_gold_tsv(tsv.as_bytes(), &sentences, &cfg).unwrap() {
        println!("{:?} {:?} {:?}: {}", d.severity, d.synset_id, d.code, d.message);
    }
}
