//! Conversational document prediction.
//!
//! Given a customer-care dialog, rank a fixed pool of knowledge-base documents
//! so the one the agent should link comes first. The pipeline is:
//!
//! 1. [`corpus`]: ingest dialogs and documents, filter and truncate dialogs
//!    at the first linked URL, split, export training triples.
//! 2. [`index`]: a two-field BM25 index (document content plus anchor text
//!    taken from training dialogs).
//! 3. [`cascade`]: a four-stage ranker (utterance-weighted retrieval,
//!    relevance-model expansion, manifold ranking, utterance-biased
//!    fixed-point term weighting) combined by score interpolation.
//! 4. [`hybrid`]: optional re-ranking of the cascade's top-k by an external
//!    scorer process.
//! 5. [`eval`]: Recall@k / MRR and the experiment runner.

pub mod cascade;
pub mod corpus;
mod error;
pub mod eval;
pub mod hybrid;
pub mod index;
pub mod synthetic;
pub mod textproc;

pub use error::{Error, Result, ScorerFailure};
