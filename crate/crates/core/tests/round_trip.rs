mod common;

use common::*;
use factbench::fixtures;
use factbench::io::{export_tsv, import_gold_tsv, load_state, save_state};
use factbench::normalize::NormalizationConfig;
use factbench::shorthand::{expand_triple, format_slot_shorthand, parse_slot_shorthand, ExpansionLimits};
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn state_save_load_on_random_states() {
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..500 {
        let st = random_state(&mut rng);
        let bytes = save_state(&st);
        let back = load_state(&bytes).unwrap();
        assert_eq!(back, st);
        assert_eq!(save_state(&back), bytes);
        assert_eq!(save_state(&st.clone()), bytes);
    }
}

#[test]
fn tsv_export_import_on_random_states() {
    let mut rng = StdRng::seed_from_u64(32);
    let cfg = NormalizationConfig::default();
    for _ in 0..500 {
        let st = random_state(&mut rng);
        let tsv = export_tsv(&st);
        let g = import_gold_tsv(&tsv, &st.sentences, &cfg).unwrap();
        assert_eq!(g.synsets, st.synsets, "{}", String::from_utf8_lossy(&tsv));
        assert_eq!(export_tsv(&st), tsv);
    }
}

#[test]
fn shorthand_format_parse_on_random_slots() {
    let mut rng = StdRng::seed_from_u64(33);
    let cfg = NormalizationConfig::default();
    let lim = ExpansionLimits::default();
    for i in 0..500 {
        let s = random_sentence(&mut rng, &format!("r{i}"), 9);
        let raw_slot = random_slot(&mut rng, s.len(), 3, 3);
        let slot = factbench::shorthand::canonicalize_slot(&raw_slot, &s);
        let text = format_slot_shorthand(&slot, &s);
        assert_eq!(parse_slot_shorthand(&text, &s, &cfg).unwrap(), slot);
        // any slot, canonical or not, comes back with the same surface forms
        let raw_text = format_slot_shorthand(&raw_slot, &s);
        assert_eq!(raw_text, text);
        let one = factbench::model::SlotTemplate::span([0]);
        let t = |x| factbench::model::TripleTemplate::new(x, one.clone(), one.clone());
        assert_eq!(
            expand_triple(&t(raw_slot.clone()), &s, &cfg, &lim).unwrap(),
            expand_triple(&t(slot.clone()), &s, &cfg, &lim).unwrap()
        );
    }
}

#[test]
fn table_fixture_round_trips() {
    let st = fixtures::table_state();
    let cfg = NormalizationConfig::default();
    assert_eq!(load_state(&save_state(&st)).unwrap(), st);
    let tsv = export_tsv(&st);
    assert_eq!(tsv, fixtures::TABLE_GOLD_TSV.as_bytes());
    let g = import_gold_tsv(&tsv, &st.sentences, &cfg).unwrap();
    assert_eq!(g.synsets, st.synsets);
    for sentence in &st.sentences {
        for synset in &st.synsets[&sentence.id] {
            for t in &synset.triples {
                for (_, slot) in t.slots() {
                    let text = format_slot_shorthand(slot, sentence);
                    assert_eq!(&parse_slot_shorthand(&text, sentence, &cfg).unwrap(), slot);
                }
            }
        }
    }
}
