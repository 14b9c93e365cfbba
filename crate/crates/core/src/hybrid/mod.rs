//! Hybrid re-ranking: the cascade's top-k candidates are re-scored by an
//! external scorer process and moved to the front in scorer order.
//!
//! The scorer speaks protocol v1: newline-delimited JSON, one request and one
//! response per line, over a spawned process's stdin/stdout or a local TCP
//! socket. After starting, the scorer prints `{"ready": true}`.
//!
//! ```text
//! -> {"query_id":"d17","dialog_tokens":["keyboard",...],"candidates":[{"doc_id":"https://...","doc_tokens":[...]}]}
//! <- {"query_id":"d17","scores":[{"doc_id":"https://...","score":0.93}]}
//! <- {"query_id":"d17","error":"bad request"}        (on failure)
//! ```

mod protocol;
mod rerank;
mod scorer;

pub use protocol::{Candidate, DocScore, Ready, ScoreRequest, ScoreResponse, PROTOCOL_VERSION};
pub use rerank::{build_request, rerank_or_fallback, rerank_top_k, score_candidates, HybridConfig};
pub use scorer::{LineTransport, ScorerHandle, Transport};
