//! Fact-synset benchmarks for open information extraction.
//!
//! Gold facts are written as triple templates over sentence tokens, with
//! `[optional]` words and `a | b` alternatives. A template expands to every
//! acceptable surface triple; a system extraction is correct when it matches
//! one of them exactly.
//!
//! ```
//! use factbench::fixtures;
//! use factbench::prelude::*;
//!
//! let report = score_fact_based(
//!     &fixtures::table_extractions(),
//!     &fixtures::table_benchmark(),
//!     &NormalizationConfig::default(),
//!     &ExpansionLimits::default(),
//!     UnknownSentencePolicy::Strict,
//! )
//! .unwrap();
//! assert_eq!((report.tp, report.fp, report.fn_), (1, 3, 3));
//! ```

pub mod error;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod normalize;
pub mod scoring;
pub mod shorthand;
pub mod tagger;

pub use error::ModelError;

pub mod prelude {
    pub use crate::io::{
        export_tsv, import_gold_tsv, load_sentences, load_state, load_system_extractions, save_state,
        AnnotationState, FormatError,
    };
    pub use crate::model::{
        ConcreteTriple, FactSynset, GoldBenchmark, Highlight, Ner, Pos, SlotName, SlotTemplate, SlotToken,
        SystemExtraction, TaggedSentence, Token, TripleTemplate,
    };
    pub use crate::normalize::{triple_key, NormalizationConfig, TripleKey};
    pub use crate::scoring::{
        lint_gold, match_extraction, pair_token_overlap, prune_ne_centric, score_fact_based,
        score_token_overlap, ContainmentTarget, Diagnostic, DiagnosticCode, ScoreReport, Severity,
        UnknownSentencePolicy,
    };
    pub use crate::shorthand::{
        build_gold_index, expand_synset, expand_triple, format_slot_shorthand, parse_slot_shorthand,
        ExpansionLimits, GoldIndex,
    };
    pub use crate::tagger::{tag, tokenize, HighlightScheme, LexiconTagger, Tagger, TaggerConfig};
}
