//! Dialogs, documents, and everything that happens to them before ranking:
//! JSON-lines ingestion, URL-based filtering and truncation, deterministic
//! splitting, training-triple export, and context truncation for neural
//! scorers.

mod context;
mod filter;
mod load;
mod split;
mod triples;
mod types;

pub use context::{select_context_tokens, TruncationStrategy};
pub use filter::{filter_dialogs, find_urls, DomainAllowlist, FilterReport, FilterRule};
pub use load::{
    load_corpus, load_corpus_files, read_dialogs, read_documents, Corpus, RecordError, RecordKind,
};
pub use split::{split_corpus, CorpusSplit, SplitAssignment, SplitSizes};
pub use triples::{export_triples, write_triples, TrainingTriple, DEFAULT_NEGATIVES};
pub use types::{Dialog, DialogRecord, Document, DocumentRecord, Speaker, TurnRecord, Utterance};
