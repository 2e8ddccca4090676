//! Build an annotation state by hand, save it, export it as TSV and read
//! both back.

use std::collections::BTreeMap;

use factbench::io::{export_tsv, import_gold_tsv, load_state, save_state, AnnotationState};
use factbench::model::FactSynset;
use factbench::normalize::NormalizationConfig;
use factbench::shorthand::parse_triple_shorthand;
use factbench::tagger::{tag, TaggerConfig};

fn main() {
    let cfg = NormalizationConfig::default();
    let s = tag("Michael Jordan took the ball.", "s1", &TaggerConfig::default()).unwrap();
    let t = parse_triple_shorthand("Michael Jordan", "took", "[the] ball", &s, &cfg).unwrap();

    let mut st = AnnotationState::new(vec![s]);
    st.synsets = BTreeMap::from([("s1".to_string(), vec![FactSynset::new("f1", vec![t])])]);
    st.meta.annotator = Some("demo".into());

    let json = save_state(&st);
    println!("{} bytes of JSON", json.len());
    assert_eq!(load_state(&json).unwrap(), st);

    let tsv = export_tsv(&st);
    print!("{}", String::from_utf8_lossy(&tsv));
    let back = import_gold_tsv(&tsv, &st.sentences, &cfg).unwrap();
    assert_eq!(back.synsets, st.synsets);
    println!("round trip ok");
}
