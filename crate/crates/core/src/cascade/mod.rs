//! The four-stage IR cascade.
//!
//! | stage | scores the shared candidate pool by |
//! |-------|-------------------------------------|
//! | 1 | BM25 of the utterance-weighted disjunctive query ([`utterance_query`]) |
//! | 2 | BM25 of the relevance-model expanded query ([`expand_relevance_model`]) |
//! | 3 | manifold propagation of stage-2 scores over LM similarity ([`manifold_rank`]) |
//! | 4 | BM25 with utterance-biased fixed-point term weights ([`fixed_point_weights`], [`utterance_biased_reweight`]) |
//!
//! [`cascade_rank`] min-max normalizes each stage over the top `rerank_depth`
//! first-pass candidates and interpolates them with the configured stage
//! weights. First-pass candidates below that depth follow in first-pass order.

mod config;
mod fixed_point;
mod manifold;
mod pipeline;
mod relevance;
mod utterance;

pub use config::{CascadeConfig, FixedPointConfig, ManifoldConfig, RelevanceModelConfig};
pub use fixed_point::{
    cooccurrence_similarity, fixed_point_solve, fixed_point_weights, utterance_biased_reweight,
    FixedPointSolution, TermWeights,
};
pub use manifold::{
    affinity_matrix, candidate_affinity, manifold_propagate, manifold_rank, Propagation,
};
pub use pipeline::{cascade_rank, cascade_trace, CascadeTrace};
pub use relevance::{expand_relevance_model, relevance_model};
pub use utterance::utterance_query;
