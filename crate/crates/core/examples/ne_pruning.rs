//! Keep only extractions whose subject and object both contain a gold
//! argument, then score what is left.

use factbench::fixtures;
use factbench::normalize::NormalizationConfig;
use factbench::scoring::{prune_ne_centric, score_fact_based, ContainmentTarget, UnknownSentencePolicy};
use factbench::shorthand::ExpansionLimits;

fn main() {
    let gold = fixtures::pichai_benchmark();
    let system = fixtures::pichai_extractions();
    let cfg = NormalizationConfig::default();
    let lim = ExpansionLimits::default();

    for target in [ContainmentTarget::GoldArguments, ContainmentTarget::NerSpans] {
        let kept = prune_ne_centric(&system, &gold, &cfg, &lim, target).unwrap();
        println!("{target:?}: kept {} of {}", kept.len(), system.len());
        for e in &kept {
            println!("  {}", e.to_triple().unwrap());
        }
        let r = score_fact_based(&kept, &gold, &cfg, &lim, UnknownSentencePolicy::Strict).unwrap();
        println!("  tp {} fp {} fn {}", r.tp, r.fp, r.fn_);
    }
}
