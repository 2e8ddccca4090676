//! Tokenize and highlight sentences, or ingest tags from another pipeline.

use factbench::model::Highlight;
use factbench::tagger::{ingest_pretagged, HighlightScheme, LexiconTagger, Tagger, TaggerConfig};

fn show(s: &factbench::model::TaggedSentence) {
    let line: Vec<String> = s
        .tokens
        .iter()
        .map(|t| match t.highlight {
            Highlight::Verb => format!("<{}>", t.text),
            Highlight::NamedEntity => format!("[{}]", t.text),
            Highlight::None => t.text.clone(),
        })
        .collect();
    println!("{}  ({})", line.join(" "), s.language);
}

fn main() {
    let tagger = LexiconTagger::default();
    for text in ["Edmund Barton was born in Australia.", "Prof. Michael Jordan lives in USA."] {
        show(&tagger.tag("x", text).unwrap());
    }

    let verbs_only = LexiconTagger::new(TaggerConfig::default().with_scheme(HighlightScheme::Verbs));
    show(&verbs_only.tag("x", "Edmund Barton was born in Australia.").unwrap());

    let pretagged = r#"{"id": "zh1", "raw": "皮查伊 是 谷歌 的 首席执行官 。", "language": "zh",
        "tokens": [{"text": "皮查伊", "pos": "NR", "ner": "PERSON"}, {"text": "是", "pos": "VC", "ner": "O"},
                   {"text": "谷歌", "pos": "NR", "ner": "ORG"}, {"text": "的", "pos": "DEG", "ner": "O"},
                   {"text": "首席执行官", "pos": "NN", "ner": "O"}, {"text": "。", "pos": "PU", "ner": "O"}]}"#;
    show(&ingest_pretagged(pretagged.as_bytes(), &TaggerConfig::default()).unwrap());
}
