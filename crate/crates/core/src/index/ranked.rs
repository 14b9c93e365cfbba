use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub doc_id: String,
    pub score: f64,
}

/// An ordered list of distinct documents with the stage that produced it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub entries: Vec<RankedEntry>,
    pub provenance: String,
}

impl RankedList {
    /// Sorts by score descending, ties broken by ascending doc id.
    pub fn from_scores<I, S>(scores: I, provenance: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut entries: Vec<RankedEntry> = scores
            .into_iter()
            .map(|(d, score)| RankedEntry {
                doc_id: d.into(),
                score,
            })
            .collect();
        entries.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| a.doc_id.cmp(&b.doc_id))
        });
        Self::from_ordered(entries, provenance)
    }

    /// Keeps the given order; only checks distinctness and finiteness.
    pub fn from_ordered(entries: Vec<RankedEntry>, provenance: impl Into<String>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for e in &entries {
            if !e.score.is_finite() {
                return Err(Error::NonFinite("ranked list score"));
            }
            if !seen.insert(e.doc_id.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "document `{}` ranked twice",
                    e.doc_id
                )));
            }
        }
        Ok(RankedList {
            entries,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.doc_id.as_str())
    }

    pub fn scores(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.score).collect()
    }

    /// 1-based rank of `doc_id`.
    pub fn rank_of(&self, doc_id: &str) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.doc_id == doc_id)
            .map(|p| p + 1)
    }

    pub fn truncated(mut self, n: usize) -> Self {
        self.entries.truncate(n);
        self
    }
}

/// `(x - min) / (max - min)`; a constant vector maps to all ones.
pub fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = hi - lo;
    if !(range > 0.0) {
        return vec![1.0; values.len()];
    }
    values.iter().map(|v| (v - lo) / range).collect()
}
