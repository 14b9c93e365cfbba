use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::RankedList;

/// One evaluated dialog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub dialog_id: String,
    pub gold: String,
    /// 1-based; `None` when the gold document was not ranked at all.
    pub gold_rank: Option<usize>,
    pub ranked: Vec<String>,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl QueryResult {
    pub fn from_ranking(dialog_id: &str, gold: &str, ranking: &RankedList) -> Self {
        let ranked: Vec<String> = ranking.doc_ids().map(str::to_owned).collect();
        QueryResult {
            dialog_id: dialog_id.to_owned(),
            gold: gold.to_owned(),
            gold_rank: ranked.iter().position(|d| d == gold).map(|p| p + 1),
            ranked,
            provenance: ranking.provenance.clone(),
            error: None,
        }
    }

    /// A query whose ranker failed; it counts as a miss.
    pub fn failed(dialog_id: &str, gold: &str, error: String) -> Self {
        QueryResult {
            dialog_id: dialog_id.to_owned(),
            gold: gold.to_owned(),
            gold_rank: None,
            ranked: Vec::new(),
            provenance: "failed".into(),
            error: Some(error),
        }
    }
}

/// Fraction of queries whose gold document is within the top `k`.
pub fn recall_at_k(results: &[QueryResult], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if results.is_empty() {
        return Err(Error::Empty("query results"));
    }
    let hits = results
        .iter()
        .filter(|r| r.gold_rank.is_some_and(|g| g <= k))
        .count();
    Ok(hits as f64 / results.len() as f64)
}

/// Mean of `1 / gold_rank`, with unranked gold contributing zero.
pub fn mean_reciprocal_rank(results: &[QueryResult]) -> Result<f64> {
    if results.is_empty() {
        return Err(Error::Empty("query results"));
    }
    let sum: f64 = results
        .iter()
        .filter_map(|r| r.gold_rank)
        .map(|g| 1.0 / g as f64)
        .sum();
    Ok(sum / results.len() as f64)
}
