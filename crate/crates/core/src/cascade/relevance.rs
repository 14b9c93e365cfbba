use std::collections::BTreeMap;

use super::config::RelevanceModelConfig;
use crate::error::{Error, Result};
use crate::index::{Field, FieldedIndex, RankedList, WeightedQuery};
use crate::textproc::Smoothing;

/// `P(w|R)` over the whole content vocabulary, estimated from the top
/// feedback documents of `first_pass`:
///
/// `P(w|R) ∝ Σ_D P(w|θ_D) · P(Q|θ_D)`, with `P(Q|θ_D) = Π_q P(q|θ_D)^{w(q)}`
/// over the normalized query weights.
///
/// Query terms that never occur in document content carry no evidence about
/// any document and are left out of `P(Q|θ_D)`. When every feedback document
/// has zero query likelihood the documents are weighted uniformly.
pub fn relevance_model(
    index: &FieldedIndex,
    query: &WeightedQuery,
    first_pass: &RankedList,
    config: &RelevanceModelConfig,
) -> Result<BTreeMap<String, f64>> {
    if first_pass.is_empty() {
        return Err(Error::Empty("first-pass ranking for relevance feedback"));
    }
    let field = Field::Content;
    let total_len = index.total_len(field) as f64;
    if total_len == 0.0 {
        return Err(Error::Empty("content field"));
    }
    let collection = |t: u32| index.collection_frequency(field, t) as f64 / total_len;

    let feedback: Vec<u32> = first_pass
        .doc_ids()
        .take(config.feedback_docs.max(1))
        .map(|d| {
            index
                .doc_index(d)
                .ok_or_else(|| Error::UnknownDocument(d.to_owned()))
        })
        .collect::<Result<_>>()?;

    let mu = match config.smoothing {
        Smoothing::Mle => 0.0,
        Smoothing::Dirichlet { mu } => mu,
    };
    let doc_prob = |doc: u32, term: u32| {
        let tf = f64::from(index.tf(field, term, doc));
        let len = index.doc_len(field, doc) as f64;
        if len + mu == 0.0 {
            0.0
        } else {
            (tf + mu * collection(term)) / (len + mu)
        }
    };

    let query_terms: Vec<(u32, f64)> = query
        .normalized_weights()
        .into_iter()
        .filter_map(|(t, w)| index.term_id(&t).map(|id| (id, w)))
        .filter(|&(id, w)| w > 0.0 && index.collection_frequency(field, id) > 0)
        .collect();
    let log_lik: Vec<f64> = feedback
        .iter()
        .map(|&d| {
            query_terms
                .iter()
                .map(|&(t, w)| w * doc_prob(d, t).ln())
                .sum()
        })
        .collect();
    let max = log_lik.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let doc_weights: Vec<f64> = if max == f64::NEG_INFINITY {
        vec![1.0 / feedback.len() as f64; feedback.len()]
    } else {
        let raw: Vec<f64> = log_lik.iter().map(|l| (l - max).exp()).collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|r| r / z).collect()
    };

    // Smoothing mass: every vocabulary term gets c(w) * Σ_D wD·mu/(len_D+mu);
    // the tf part is added sparsely from each feedback document.
    let smooth_mass: f64 = feedback
        .iter()
        .zip(&doc_weights)
        .map(|(&d, &wd)| {
            let len = index.doc_len(field, d) as f64;
            if len + mu == 0.0 { 0.0 } else { wd * mu / (len + mu) }
        })
        .sum();
    let mut rm = vec![0.0f64; index.num_terms()];
    if smooth_mass > 0.0 {
        for (t, p) in rm.iter_mut().enumerate() {
            *p = smooth_mass * collection(t as u32);
        }
    }
    for (&d, &wd) in feedback.iter().zip(&doc_weights) {
        let len = index.doc_len(field, d) as f64;
        if len + mu == 0.0 {
            continue;
        }
        for &(t, tf) in index.doc_terms(field, d) {
            rm[t as usize] += wd * f64::from(tf) / (len + mu);
        }
    }
    let z: f64 = rm.iter().sum();
    if z <= 0.0 {
        return Err(Error::Empty("feedback documents have no content"));
    }
    Ok(rm
        .into_iter()
        .enumerate()
        .filter(|&(_, p)| p > 0.0)
        .map(|(t, p)| (index.term(t as u32).to_owned(), p / z))
        .collect())
}

/// Mixes the normalized original query with the top `feedback_terms` of the
/// relevance model (renormalized).
pub fn expand_relevance_model(
    index: &FieldedIndex,
    query: &WeightedQuery,
    first_pass: &RankedList,
    config: &RelevanceModelConfig,
) -> Result<WeightedQuery> {
    let lambda = config.original_weight;
    let original = query.normalized_weights();
    if lambda >= 1.0 {
        return WeightedQuery::from_term_weights(original);
    }
    let rm = relevance_model(index, query, first_pass, config)?;
    let mut top: Vec<(&String, f64)> = rm.iter().map(|(t, &p)| (t, p)).collect();
    top.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    top.truncate(config.feedback_terms);
    let z: f64 = top.iter().map(|(_, p)| p).sum();

    let mut mixed: BTreeMap<String, f64> = original
        .into_iter()
        .map(|(t, w)| (t, lambda * w))
        .collect();
    for (t, p) in top {
        *mixed.entry(t.clone()).or_insert(0.0) += (1.0 - lambda) * p / z;
    }
    WeightedQuery::from_term_weights(mixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;
    use crate::index::build_index;

    fn index(texts: &[&str]) -> FieldedIndex {
        let docs: Vec<_> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document::new(format!("d{i}"), *t).unwrap())
            .collect();
        build_index(&docs).unwrap()
    }

    #[test]
    fn single_mle_doc_reduces_to_its_lm() {
        let idx = index(&["x x b", "c"]);
        let fp = RankedList::from_scores([("d0", 1.0)], "t").unwrap();
        let q = WeightedQuery::from_term_weights([("x", 1.0)]).unwrap();
        let cfg = RelevanceModelConfig {
            feedback_docs: 1,
            smoothing: Smoothing::Mle,
            ..Default::default()
        };
        let rm = relevance_model(&idx, &q, &fp, &cfg).unwrap();
        assert_eq!(rm.len(), 2);
        assert!((rm["x"] - 2.0 / 3.0).abs() < 1e-15);
        assert!((rm["b"] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_one_is_identity() {
        let idx = index(&["x x b", "c"]);
        let fp = RankedList::from_scores([("d0", 1.0)], "t").unwrap();
        let q = WeightedQuery::from_term_weights([("x", 3.0), ("c", 1.0)]).unwrap();
        let cfg = RelevanceModelConfig {
            original_weight: 1.0,
            ..Default::default()
        };
        let e = expand_relevance_model(&idx, &q, &fp, &cfg).unwrap();
        assert_eq!(e.term_weights(), &q.normalized_weights());
    }

    #[test]
    fn feedback_docs_clamped_and_mix_sums_to_one() {
        let idx = index(&["a a b", "c d", "a e"]);
        let fp = RankedList::from_scores([("d0", 2.0), ("d2", 1.0)], "t").unwrap();
        let q = WeightedQuery::from_term_weights([("x", 1.0)]).unwrap();
        let cfg = RelevanceModelConfig {
            feedback_docs: 50,
            feedback_terms: 3,
            ..Default::default()
        };
        let e = expand_relevance_model(&idx, &q, &fp, &cfg).unwrap();
        let total: f64 = e.term_weights().values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(relevance_model(&idx, &q, &RankedList::default(), &cfg).is_err());
    }
}
