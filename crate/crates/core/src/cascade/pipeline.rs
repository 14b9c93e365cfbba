use serde::Serialize;

use super::config::CascadeConfig;
use super::fixed_point::{fixed_point_weights, utterance_biased_reweight};
use super::manifold::{candidate_affinity, manifold_propagate};
use super::relevance::expand_relevance_model;
use super::utterance::utterance_query;
use crate::corpus::Dialog;
use crate::error::{Error, Result};
use crate::index::bm25::score_doc;
use crate::index::{min_max_normalize, retrieve, FieldedIndex, RankedEntry, RankedList};

/// Every intermediate of one cascade run.
#[derive(Debug, Clone, Serialize)]
pub struct CascadeTrace {
    /// First-pass ranking, up to `first_pass_depth` documents.
    pub first_pass: RankedList,
    /// Each stage's own ranking of the re-ranked pool (raw stage scores).
    pub stages: Vec<RankedList>,
    pub ranking: RankedList,
}

pub fn cascade_rank(index: &FieldedIndex, dialog: &Dialog, config: &CascadeConfig) -> Result<RankedList> {
    Ok(cascade_trace(index, dialog, config)?.ranking)
}

pub fn cascade_trace(
    index: &FieldedIndex,
    dialog: &Dialog,
    config: &CascadeConfig,
) -> Result<CascadeTrace> {
    config.validate()?;
    let fw = &config.field_weights;

    let query = utterance_query(dialog)?;
    let first_pass = retrieve(index, fw, &query, config.first_pass_depth)?;
    if first_pass.is_empty() {
        return Ok(CascadeTrace {
            first_pass,
            stages: Vec::new(),
            ranking: RankedList {
                entries: Vec::new(),
                provenance: "irc".into(),
            },
        });
    }
    let pool: Vec<u32> = first_pass
        .doc_ids()
        .take(config.rerank_depth)
        .map(|d| index.doc_index(d).ok_or_else(|| Error::UnknownDocument(d.into())))
        .collect::<Result<_>>()?;

    let s1: Vec<f64> = first_pass.entries[..pool.len()].iter().map(|e| e.score).collect();

    let expanded = expand_relevance_model(index, &query, &first_pass, &config.relevance)?;
    let s2: Vec<f64> = pool.iter().map(|&d| score_doc(index, fw, &expanded, d)).collect();

    let mc = &config.manifold;
    let affinity = candidate_affinity(index, &pool, mc.mu);
    let s3 = manifold_propagate(&affinity, &min_max_normalize(&s2), mc.alpha, mc.tolerance, mc.max_iterations)?
        .scores;

    let fpc = &config.fixed_point;
    let fp = fixed_point_weights(index, dialog, fpc.delta, fpc.tolerance, fpc.max_iterations)?;
    let biased = utterance_biased_reweight(dialog, &fp).to_query()?;
    let s4: Vec<f64> = pool.iter().map(|&d| score_doc(index, fw, &biased, d)).collect();

    let stage_scores = [s1, s2, s3, s4];
    let normalized: Vec<Vec<f64>> = stage_scores.iter().map(|s| min_max_normalize(s)).collect();
    let combined: Vec<f64> = (0..pool.len())
        .map(|i| {
            config
                .stage_weights
                .iter()
                .zip(&normalized)
                .map(|(l, s)| l * s[i])
                .sum()
        })
        .collect();

    let ids: Vec<&str> = pool.iter().map(|&d| index.doc_id(d)).collect();
    let stages = stage_scores
        .iter()
        .enumerate()
        .map(|(j, s)| RankedList::from_scores(ids.iter().copied().zip(s.iter().copied()), format!("irc-stage{}", j + 1)))
        .collect::<Result<Vec<_>>>()?;

    let head = RankedList::from_scores(ids.iter().copied().zip(combined), "irc")?;
    let mut entries = head.entries;
    entries.extend(first_pass.entries[pool.len()..].iter().map(|e| RankedEntry {
        doc_id: e.doc_id.clone(),
        score: e.score,
    }));
    let ranking = RankedList::from_ordered(entries, "irc")?;
    Ok(CascadeTrace {
        first_pass,
        stages,
        ranking,
    })
}
