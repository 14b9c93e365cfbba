//! Dual-field inverted index with BM25 scoring.
//!
//! Every document has a `Content` field (its own text) and an `Anchor` field
//! built from the training dialogs that link to it. Both fields share one term
//! dictionary; statistics (document frequency, lengths, average length) are
//! kept per field and BM25 is evaluated per field, then combined with
//! per-field boosts.

pub(crate) mod bm25;
mod fielded;
mod query;
mod ranked;
mod snapshot;

pub use bm25::{bm25_score, idf, retrieve, Bm25Params, FieldWeights};
pub use fielded::{attach_anchor_text, build_index, Field, FieldedIndex, Posting};
pub use query::{QueryClause, WeightedQuery};
pub use ranked::{min_max_normalize, RankedEntry, RankedList};
pub use snapshot::{SNAPSHOT_FORMAT, SNAPSHOT_VERSION};
