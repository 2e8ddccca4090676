mod common;

use std::collections::BTreeMap;

use common::*;
use factbench::fixtures;
use factbench::model::{ConcreteTriple, SystemExtraction};
use factbench::normalize::NormalizationConfig;
use factbench::scoring::{
    format_score, pair_token_overlap, prune_ne_centric, score_fact_based, ContainmentTarget,
    UnknownSentencePolicy,
};
use factbench::shorthand::ExpansionLimits;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn score(xs: &[SystemExtraction], g: &factbench::model::GoldBenchmark) -> (usize, usize, usize) {
    let r = score_fact_based(
        xs,
        g,
        &NormalizationConfig::default(),
        &ExpansionLimits::default(),
        UnknownSentencePolicy::Strict,
    )
    .unwrap();
    (r.tp, r.fp, r.fn_)
}

#[test]
fn agrees_with_brute_force_on_random_benchmarks() {
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..200 {
        let g = random_benchmark(&mut rng, 2);
        let xs = random_extractions(&mut rng, &g);
        let (tp, fp, fn_) = score(&xs, &g);
        assert_eq!((tp, fp, fn_), oracle_score(&xs, &g));
        assert_eq!(tp + fn_, g.synset_count());
    }
}

#[test]
fn order_and_duplicates() {
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..100 {
        let g = random_benchmark(&mut rng, 2);
        let mut xs = random_extractions(&mut rng, &g);
        let (tp, fp, fn_) = score(&xs, &g);
        if xs.is_empty() {
            continue;
        }
        let pick = xs[rng.random_range(0..xs.len())].clone();
        let (_, pick_fp, _) = score(std::slice::from_ref(&pick), &g);
        xs.push(pick.clone());
        xs.push(pick);
        xs.shuffle(&mut rng);
        let (tp2, fp2, fn2) = score(&xs, &g);
        assert_eq!((tp2, fn2), (tp, fn_));
        // an unmatched copy adds exactly one false positive
        assert_eq!(fp2, fp + 2 * pick_fp);
    }
}

#[test]
fn toy_benchmark_scores() {
    let g = fixtures::toy_benchmark();
    let xs = fixtures::toy_system();
    let r = score_fact_based(
        &xs,
        &g,
        &NormalizationConfig::default(),
        &ExpansionLimits::default(),
        UnknownSentencePolicy::Strict,
    )
    .unwrap();
    assert_eq!((r.tp, r.fp, r.fn_), fixtures::TOY_COUNTS);
    assert_eq!(oracle_score(&xs, &g), fixtures::TOY_COUNTS);
    assert_eq!(
        [r.precision, r.recall, r.f1].map(format_score),
        ["0.69".to_string(), "0.64".into(), "0.67".into()]
    );
    // hand-counted per sentence: (tp, fp, fn)
    let frozen = [
        ("t01", (1, 1, 0)),
        ("t02", (1, 0, 0)),
        ("t03", (1, 0, 0)),
        ("t04", (1, 0, 1)),
        ("t05", (0, 1, 2)),
        ("t06", (1, 0, 0)),
        ("t07", (1, 1, 1)),
        ("t08", (1, 0, 1)),
        ("t09", (1, 0, 0)),
        ("t10", (1, 1, 0)),
    ];
    for (sid, (tp, fp, fn_)) in frozen {
        let c = r.per_sentence[sid];
        assert_eq!((c.tp, c.fp, c.fn_), (tp, fp, fn_), "{sid}");
    }
}

#[test]
fn pruning_is_an_idempotent_subsequence() {
    let mut rng = StdRng::seed_from_u64(5);
    let cfg = NormalizationConfig::default();
    let lim = ExpansionLimits::default();
    for _ in 0..100 {
        let g = random_benchmark(&mut rng, 2);
        let xs = random_extractions(&mut rng, &g);
        for target in [ContainmentTarget::GoldArguments, ContainmentTarget::NerSpans] {
            let once = prune_ne_centric(&xs, &g, &cfg, &lim, target).unwrap();
            let twice = prune_ne_centric(&once, &g, &cfg, &lim, target).unwrap();
            assert_eq!(once, twice);
            let mut it = xs.iter();
            assert!(once.iter().all(|k| it.any(|x| x == k)));
        }
    }
}

fn word() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "The", "the", "c", "d"]).prop_map(str::to_owned)
}

fn words() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(word(), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn contained_system_has_full_precision(s in words(), p in words(), o in words(), keep in prop::collection::vec(any::<bool>(), 12)) {
        let gold = ConcreteTriple::new(s.clone(), p.clone(), o.clone()).unwrap();
        let mut k = keep.into_iter().cycle();
        let mut sub = |v: &[String]| {
            let mut out: Vec<String> = v.iter().filter(|_| k.next().unwrap()).cloned().collect();
            if out.is_empty() {
                out.push(v[0].clone());
            }
            out
        };
        let sys = ConcreteTriple::new(sub(&s), sub(&p), sub(&o)).unwrap();
        let cfg = NormalizationConfig::default();
        let score = pair_token_overlap(&sys, &gold, &cfg);
        prop_assert_eq!(score.precision, 1.0);
        prop_assert!((0.0..=1.0).contains(&score.recall));
        let same = pair_token_overlap(&gold, &gold, &cfg);
        prop_assert_eq!((same.precision, same.recall), (1.0, 1.0));
    }

    #[test]
    fn pair_scores_stay_in_unit_range(a in (words(), words(), words()), b in (words(), words(), words())) {
        let x = ConcreteTriple::new(a.0, a.1, a.2).unwrap();
        let y = ConcreteTriple::new(b.0, b.1, b.2).unwrap();
        let s = pair_token_overlap(&x, &y, &NormalizationConfig::case_sensitive());
        prop_assert!((0.0..=1.0).contains(&s.precision));
        prop_assert!((0.0..=1.0).contains(&s.recall));
    }
}

#[test]
fn token_overlap_toy_identity() {
    let g = fixtures::toy_benchmark();
    let mut gold = BTreeMap::new();
    let mut xs = Vec::new();
    for (sentence, synsets) in g.iter() {
        for synset in synsets {
            let t = &synset.triples[0];
            let realization = oracle_expand(t, sentence).remove(0);
            let [s, p, o] = realization.map(|w| w.join(" "));
            xs.push(SystemExtraction::new(&sentence.id, &s, &p, &o).unwrap());
            gold.entry(sentence.id.clone())
                .or_insert_with(Vec::new)
                .push(ConcreteTriple::from_strs(&s, &p, &o).unwrap());
        }
    }
    let r = factbench::scoring::score_token_overlap(&xs, &gold, &NormalizationConfig::default()).unwrap();
    assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
}
