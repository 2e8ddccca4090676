//! Brute-force reference implementations and seeded generators shared by the
//! integration tests. Nothing here calls the library's expansion, keying or
//! scoring code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use factbench::io::{AnnotationState, StateMeta};
use factbench::model::{
    FactSynset, GoldBenchmark, Highlight, Ner, Pos, SlotTemplate, SlotToken, SystemExtraction,
    TaggedSentence, Token, TripleTemplate,
};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::Rng;

/// A surface triple as three lowercased word lists.
pub type Surface = [Vec<String>; 3];

fn words_of(alt: &[SlotToken], sentence: &TaggedSentence) -> Vec<(String, bool)> {
    alt.iter()
        .map(|t| (sentence.tokens[t.token_index].text.to_lowercase(), t.optional))
        .collect()
}

/// Every include/exclude choice over the optional words, by recursion.
fn subsets(words: &[(String, bool)]) -> Vec<Vec<String>> {
    match words.split_first() {
        None => vec![vec![]],
        Some(((w, optional), rest)) => {
            let tails = subsets(rest);
            let mut out = Vec::new();
            for t in &tails {
                let mut with = vec![w.clone()];
                with.extend(t.iter().cloned());
                out.push(with);
            }
            if *optional {
                out.extend(tails);
            }
            out
        }
    }
}

pub fn oracle_slot(slot: &SlotTemplate, sentence: &TaggedSentence) -> Vec<Vec<String>> {
    slot.alternatives
        .iter()
        .flat_map(|alt| subsets(&words_of(alt, sentence)))
        .collect()
}

/// All realizations of a template, duplicates included.
pub fn oracle_expand(t: &TripleTemplate, sentence: &TaggedSentence) -> Vec<Surface> {
    let s = oracle_slot(&t.subject, sentence);
    let p = oracle_slot(&t.predicate, sentence);
    let o = oracle_slot(&t.object, sentence);
    let mut out = Vec::new();
    for a in &s {
        for b in &p {
            for c in &o {
                out.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    out
}

/// ∏ over slots of Σ over alternatives of 2^(optional count).
pub fn product_formula(t: &TripleTemplate) -> u128 {
    [&t.subject, &t.predicate, &t.object]
        .iter()
        .map(|slot| {
            slot.alternatives
                .iter()
                .map(|alt| 2u128.pow(alt.iter().filter(|x| x.optional).count() as u32))
                .sum::<u128>()
        })
        .product()
}

pub fn surface_of(subject: &str, predicate: &str, object: &str) -> Surface {
    let split = |s: &str| s.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>();
    [split(subject), split(predicate), split(object)]
}

pub fn surface_of_words(t: &factbench::model::ConcreteTriple) -> Surface {
    let low = |v: &[String]| v.iter().map(|w| w.to_lowercase()).collect::<Vec<_>>();
    [low(&t.subject), low(&t.predicate), low(&t.object)]
}

/// Fact-based (tp, fp, fn) by comparing strings against every expansion.
pub fn oracle_score(extractions: &[SystemExtraction], g: &GoldBenchmark) -> (usize, usize, usize) {
    let mut covered: BTreeSet<(String, String)> = BTreeSet::new();
    let mut fp = 0;
    let mut total = 0;
    let mut realizations: BTreeMap<&str, Vec<(&str, BTreeSet<Surface>)>> = BTreeMap::new();
    for sentence in &g.sentences {
        for synset in g.synsets.get(&sentence.id).into_iter().flatten() {
            total += 1;
            let set = synset
                .triples
                .iter()
                .flat_map(|t| oracle_expand(t, sentence))
                .collect();
            realizations.entry(&sentence.id).or_default().push((&synset.id, set));
        }
    }
    for e in extractions {
        let s = surface_of(&e.subject, &e.predicate, &e.object);
        let mut hit = false;
        for (synset, set) in realizations.get(e.sentence_id.as_str()).into_iter().flatten() {
            if set.contains(&s) {
                hit = true;
                covered.insert((e.sentence_id.clone(), synset.to_string()));
            }
        }
        if !hit {
            fp += 1;
        }
    }
    (covered.len(), fp, total - covered.len())
}

const VOCAB: &[&str] = &[
    "a", "A", "the", "The", "he", "was", "born", "in", "Paris", "paris", "won", "prize", "x", "y", "z",
    "ü", "日本", "co-op", "Jr.", "'s",
];

pub fn random_sentence(rng: &mut StdRng, id: &str, max_len: usize) -> TaggedSentence {
    let n = rng.random_range(1..=max_len);
    let words: Vec<&str> = (0..n).map(|_| *VOCAB.choose(rng).unwrap()).collect();
    let raw = words.join(" ");
    let tokens = words
        .iter()
        .enumerate()
        .map(|(i, w)| Token {
            index: i,
            text: (*w).to_owned(),
            pos: *[Pos::Verb, Pos::Noun, Pos::Adj, Pos::Det, Pos::Other].choose(rng).unwrap(),
            ner: *[Ner::Person, Ner::Org, Ner::Loc, Ner::Misc, Ner::None].choose(rng).unwrap(),
            highlight: *[Highlight::Verb, Highlight::NamedEntity, Highlight::None].choose(rng).unwrap(),
        })
        .collect();
    let lang = *["en", "zh", "de"].choose(rng).unwrap();
    TaggedSentence {
        id: id.to_owned(),
        raw,
        language: lang.to_owned(),
        tokens,
    }
}

/// A valid slot: sorted distinct indices, at least one required token per
/// alternative.
pub fn random_slot(rng: &mut StdRng, len: usize, max_alts: usize, max_opt: usize) -> SlotTemplate {
    let alts = rng.random_range(1..=max_alts);
    let alternatives = (0..alts)
        .map(|_| {
            let size = rng.random_range(1..=len.min(max_opt + 2));
            let mut idx = rand::seq::index::sample(rng, len, size).into_vec();
            idx.sort_unstable();
            let opt_count = rng.random_range(0..=max_opt.min(size - 1));
            let opt: BTreeSet<usize> = rand::seq::index::sample(rng, size, opt_count).into_iter().collect();
            idx.into_iter()
                .enumerate()
                .map(|(i, t)| SlotToken {
                    token_index: t,
                    optional: opt.contains(&i),
                })
                .collect()
        })
        .collect();
    SlotTemplate::new(alternatives)
}

pub fn random_template(rng: &mut StdRng, len: usize, max_alts: usize, max_opt: usize) -> TripleTemplate {
    TripleTemplate::new(
        random_slot(rng, len, max_alts, max_opt),
        random_slot(rng, len, max_alts, max_opt),
        random_slot(rng, len, max_alts, max_opt),
    )
}

/// Up to 3 sentences, each with up to 3 synsets of up to 3 templates.
pub fn random_benchmark(rng: &mut StdRng, max_opt: usize) -> GoldBenchmark {
    let n = rng.random_range(1..=3);
    let mut sentences = Vec::new();
    let mut synsets = BTreeMap::new();
    for i in 0..n {
        let s = random_sentence(rng, &format!("s{i}"), 7);
        let k = rng.random_range(0..=3);
        if k > 0 {
            let list = (0..k)
                .map(|j| {
                    let m = rng.random_range(1..=3);
                    let ts = (0..m).map(|_| random_template(rng, s.len(), 2, max_opt)).collect();
                    FactSynset::new(format!("f{j}"), ts)
                })
                .collect();
            synsets.insert(s.id.clone(), list);
        }
        sentences.push(s);
    }
    GoldBenchmark::new(sentences, synsets)
}

/// A mix of gold realizations (with random casing) and random word triples.
pub fn random_extractions(rng: &mut StdRng, g: &GoldBenchmark) -> Vec<SystemExtraction> {
    let mut out = Vec::new();
    let n = rng.random_range(0..=8);
    for _ in 0..n {
        let sentence = g.sentences.choose(rng).unwrap();
        let synsets = g.synsets.get(&sentence.id);
        let from_gold = synsets.is_some() && rng.random_bool(0.6);
        let [s, p, o] = if from_gold {
            let synset = synsets.unwrap().choose(rng).unwrap();
            let t = synset.triples.choose(rng).unwrap();
            oracle_expand(t, sentence).choose(rng).unwrap().clone()
        } else {
            let mut slot = || {
                let k = rng.random_range(1..=3);
                (0..k)
                    .map(|_| sentence.tokens.choose(rng).unwrap().text.clone())
                    .collect::<Vec<_>>()
            };
            [slot(), slot(), slot()]
        };
        let mut join = |ws: Vec<String>| {
            ws.into_iter()
                .map(|w| if rng.random_bool(0.3) { w.to_uppercase() } else { w })
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push(SystemExtraction::new(sentence.id.clone(), join(s), join(p), join(o)).unwrap());
    }
    out
}

/// A valid annotation state whose slots sit on the earliest matching tokens,
/// the only form text shorthand can name unambiguously.
pub fn random_state(rng: &mut StdRng) -> AnnotationState {
    let mut g = random_benchmark(rng, 2);
    for (sid, list) in g.synsets.iter_mut() {
        let sentence = g.sentences.iter().find(|s| &s.id == sid).unwrap();
        for synset in list {
            for t in &mut synset.triples {
                t.subject = factbench::shorthand::canonicalize_slot(&t.subject, sentence);
                t.predicate = factbench::shorthand::canonicalize_slot(&t.predicate, sentence);
                t.object = factbench::shorthand::canonicalize_slot(&t.object, sentence);
            }
        }
    }
    let mut st = AnnotationState::from_gold(g);
    if rng.random_bool(0.3) {
        st.cursor = None;
    }
    if rng.random_bool(0.5) {
        st.meta = StateMeta {
            annotator: Some("ann \"q\" \u{e9}".into()),
            created: Some("2024-01-01T00:00:00Z".into()),
            updated: None,
            extra: BTreeMap::new(),
        };
    }
    st
}
