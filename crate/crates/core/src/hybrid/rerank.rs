use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::protocol::{Candidate, ScoreRequest};
use super::scorer::ScorerHandle;
use crate::corpus::{select_context_tokens, Dialog, Document, TruncationStrategy};
use crate::error::{Error, Result};
use crate::index::{RankedEntry, RankedList};
use crate::textproc::analyze;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HybridConfig {
    /// Number of cascade candidates sent to the scorer.
    pub k: usize,
    pub dialog_token_limit: usize,
    pub doc_token_limit: usize,
    pub strategy: TruncationStrategy,
    pub timeout_ms: u64,
}

impl Default for HybridConfig {
    fn default() -> Self {
        HybridConfig {
            k: 20,
            dialog_token_limit: 256,
            doc_token_limit: 256,
            strategy: TruncationStrategy::InputB,
            timeout_ms: 30_000,
        }
    }
}

impl HybridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.dialog_token_limit == 0 || self.doc_token_limit == 0 {
            return Err(Error::InvalidArgument(
                "hybrid k and token limits must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Request for the top `config.k` entries of `ranking`. Documents are cut to
/// their leading tokens; the dialog follows `config.strategy`.
pub fn build_request(
    dialog: &Dialog,
    ranking: &RankedList,
    documents: &HashMap<&str, &Document>,
    config: &HybridConfig,
) -> Result<ScoreRequest> {
    let context = analyze(&dialog.context_text()).terms;
    let dialog_tokens = select_context_tokens(&context, config.dialog_token_limit, config.strategy);
    let candidates = ranking
        .entries
        .iter()
        .take(config.k)
        .map(|e| {
            let doc = documents
                .get(e.doc_id.as_str())
                .ok_or_else(|| Error::UnknownDocument(e.doc_id.clone()))?;
            let mut doc_tokens = analyze(&doc.content).terms;
            doc_tokens.truncate(config.doc_token_limit);
            Ok(Candidate {
                doc_id: e.doc_id.clone(),
                doc_tokens,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreRequest {
        query_id: dialog.dialog_id.clone(),
        dialog_tokens,
        candidates,
    })
}

/// Sends one request and returns the scorer's scores by doc id.
pub fn score_candidates(
    scorer: &mut ScorerHandle,
    request: &ScoreRequest,
) -> Result<HashMap<String, f64>> {
    if request.candidates.is_empty() {
        return Ok(HashMap::new());
    }
    scorer.score(request)
}

/// Reorders the first `k` entries by `scores` (descending; ties keep the
/// original order) and leaves the rest of the list untouched. Head entries
/// carry scorer scores, tail entries their cascade scores.
pub fn rerank_top_k(ranking: &RankedList, scores: &HashMap<String, f64>, k: usize) -> Result<RankedList> {
    let k = k.min(ranking.len());
    let mut head = Vec::with_capacity(k);
    for (rank, e) in ranking.entries[..k].iter().enumerate() {
        let s = *scores
            .get(&e.doc_id)
            .ok_or_else(|| Error::InvalidArgument(format!("no scorer score for `{}`", e.doc_id)))?;
        head.push((rank, s, e.doc_id.clone()));
    }
    head.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let entries = head
        .into_iter()
        .map(|(_, score, doc_id)| RankedEntry { doc_id, score })
        .chain(ranking.entries[k..].iter().cloned())
        .collect();
    RankedList::from_ordered(entries, "hybrid")
}

/// Hybrid ranking for one dialog. On any scorer failure the cascade ranking
/// is returned unchanged (provenance `irc-fallback`) together with the error.
pub fn rerank_or_fallback(
    scorer: &mut ScorerHandle,
    dialog: &Dialog,
    ranking: &RankedList,
    documents: &HashMap<&str, &Document>,
    config: &HybridConfig,
) -> Result<(RankedList, Option<Error>)> {
    let request = build_request(dialog, ranking, documents, config)?;
    match score_candidates(scorer, &request) {
        Ok(scores) => Ok((rerank_top_k(ranking, &scores, config.k)?, None)),
        Err(e @ Error::Scorer { .. }) => {
            let mut fallback = ranking.clone();
            fallback.provenance = "irc-fallback".into();
            Ok((fallback, Some(e)))
        }
        Err(e) => Err(e),
    }
}
