//! Evaluation of system extractions against gold.

use thiserror::Error;

use crate::error::ModelError;
use crate::shorthand::ExpandError;

pub mod fact;
pub mod lint;
pub mod overlap;
pub mod prune;

pub use fact::{match_extraction, score_fact_based, score_with_index, Counts, Match, ScoreReport, UnknownSentencePolicy};
pub use lint::{has_errors, lint_gold, lint_gold_tsv, Diagnostic, DiagnosticCode, Severity};
pub use overlap::{pair_token_overlap, score_token_overlap, synset_reference_triples, Assignment, OverlapReport, PairScore};
pub use prune::{prune_ne_centric, ContainmentTarget};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error("extraction references unknown sentence {0:?}")]
    UnknownSentence(String),
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `num / den`, or 0 when `den` is 0.
pub(crate) fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean, or 0 when both inputs are 0.
pub(crate) fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Two-decimal rendering used for reports.
pub fn format_score(x: f64) -> String {
    format!("{x:.2}")
}
