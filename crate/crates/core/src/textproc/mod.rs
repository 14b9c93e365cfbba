//! Text analysis and unigram language models.
//!
//! [`analyze`] is the single entry point every index field and query goes
//! through, so document and dialog terms always agree. The language-model half
//! ([`LanguageModel`], [`bhattacharyya`]) backs relevance feedback and the
//! manifold stage of the cascade.

mod analyzer;
mod lm;

pub use analyzer::{analyze, Analyzer, TermSequence, ENGLISH_STOPWORDS};
pub use lm::{bhattacharyya, estimate_lm, CollectionModel, LanguageModel, Smoothing};
