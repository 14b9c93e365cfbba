use serde::{Deserialize, Serialize};

use super::fielded::{Field, FieldedIndex};
use super::query::WeightedQuery;
use super::ranked::RankedList;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 1.2, b: 0.75 }
    }
}

/// Per-field score multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldWeights {
    pub content: f64,
    pub anchor: f64,
}

impl Default for FieldWeights {
    fn default() -> Self {
        FieldWeights {
            content: 1.0,
            anchor: 1.0,
        }
    }
}

impl FieldWeights {
    pub fn content_only() -> Self {
        FieldWeights {
            content: 1.0,
            anchor: 0.0,
        }
    }

    pub fn boost(&self, field: Field) -> f64 {
        match field {
            Field::Content => self.content,
            Field::Anchor => self.anchor,
        }
    }
}

/// `ln(1 + (N - df + 0.5) / (df + 0.5))`, never negative.
pub fn idf(doc_count: usize, df: usize) -> f64 {
    let n = doc_count as f64;
    let df = df as f64;
    (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
}

#[inline]
fn term_field_score(index: &FieldedIndex, field: Field, term: u32, doc: u32, tf: u32, avg: f64) -> f64 {
    let Bm25Params { k1, b } = index.params;
    let tf = f64::from(tf);
    let len = index.doc_len(field, doc) as f64;
    let norm = if avg > 0.0 { len / avg } else { 0.0 };
    let idf = idf(index.doc_count(), index.postings(field, term).len());
    idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm))
}

/// Weighted BM25 of one document, summed over boosted fields.
pub fn bm25_score(
    index: &FieldedIndex,
    weights: &FieldWeights,
    query: &WeightedQuery,
    doc_id: &str,
) -> Result<f64> {
    let doc = index
        .doc_index(doc_id)
        .ok_or_else(|| Error::UnknownDocument(doc_id.to_owned()))?;
    Ok(score_doc(index, weights, query, doc))
}

pub(crate) fn score_doc(
    index: &FieldedIndex,
    weights: &FieldWeights,
    query: &WeightedQuery,
    doc: u32,
) -> f64 {
    let avgs = Field::ALL.map(|f| index.avg_len(f));
    let mut score = 0.0;
    for (term, &w) in query.term_weights() {
        let Some(tid) = index.term_id(term) else {
            continue;
        };
        for (fi, field) in Field::ALL.into_iter().enumerate() {
            let boost = weights.boost(field);
            if boost == 0.0 || w == 0.0 {
                continue;
            }
            let tf = index.tf(field, tid, doc);
            if tf > 0 {
                score += boost * w * term_field_score(index, field, tid, doc, tf, avgs[fi]);
            }
        }
    }
    score
}

/// Top-`n` documents sharing at least one positively weighted term with the
/// query in a boosted field.
pub fn retrieve(
    index: &FieldedIndex,
    weights: &FieldWeights,
    query: &WeightedQuery,
    n: usize,
) -> Result<RankedList> {
    if n == 0 {
        return Err(Error::InvalidArgument("retrieve needs n >= 1".into()));
    }
    let avgs = Field::ALL.map(|f| index.avg_len(f));
    let mut acc = vec![0.0f64; index.doc_count()];
    let mut hit = vec![false; index.doc_count()];
    // Same term-then-field accumulation order as `score_doc`, so scores agree
    // bit for bit.
    for (term, &w) in query.term_weights() {
        let Some(tid) = index.term_id(term) else {
            continue;
        };
        for (fi, field) in Field::ALL.into_iter().enumerate() {
            let boost = weights.boost(field);
            if boost == 0.0 || w == 0.0 {
                continue;
            }
            for p in index.postings(field, tid) {
                acc[p.doc as usize] +=
                    boost * w * term_field_score(index, field, tid, p.doc, p.tf, avgs[fi]);
                hit[p.doc as usize] = true;
            }
        }
    }
    let ranked = RankedList::from_scores(
        hit.iter()
            .enumerate()
            .filter(|(_, &h)| h)
            .map(|(d, _)| (index.doc_id(d as u32), acc[d])),
        "bm25",
    )?;
    Ok(ranked.truncated(n))
}
