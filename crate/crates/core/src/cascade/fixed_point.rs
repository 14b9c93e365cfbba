use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::Dialog;
use crate::error::{Error, Result};
use crate::index::{idf, Field, FieldedIndex, WeightedQuery};
use crate::textproc::analyze;

/// Non-negative term weights summing to one.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TermWeights {
    weights: BTreeMap<String, f64>,
}

impl TermWeights {
    /// Normalizes `raw` onto the simplex. Fails on negative or non-finite
    /// entries, or when everything is zero.
    pub fn normalized<S, I>(raw: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, f64)>,
    {
        let weights: BTreeMap<String, f64> = raw.into_iter().map(|(t, w)| (t.into(), w)).collect();
        if weights.values().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::NonFinite("term weights"));
        }
        let z: f64 = weights.values().sum();
        if z <= 0.0 {
            return Err(Error::Empty("term weights"));
        }
        Ok(TermWeights {
            weights: weights.into_iter().map(|(t, w)| (t, w / z)).collect(),
        })
    }

    pub fn get(&self, term: &str) -> f64 {
        self.weights.get(term).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(t, &w)| (t.as_str(), w))
    }

    pub fn to_query(&self) -> Result<WeightedQuery> {
        WeightedQuery::from_term_weights(self.iter())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointSolution {
    pub weights: TermWeights,
    pub base: TermWeights,
    /// Updates performed.
    pub iterations: usize,
    /// Whether the last update moved the weights by less than the tolerance
    /// (L1).
    pub converged: bool,
}

/// Co-occurrence cosine over the content field:
/// `|docs containing both| / sqrt(df(a)·df(b))`, zero if either df is zero.
pub fn cooccurrence_similarity(index: &FieldedIndex, a: &str, b: &str) -> f64 {
    let (Some(ta), Some(tb)) = (index.term_id(a), index.term_id(b)) else {
        return 0.0;
    };
    let pa = index.postings(Field::Content, ta);
    let pb = index.postings(Field::Content, tb);
    if pa.is_empty() || pb.is_empty() {
        return 0.0;
    }
    let (mut i, mut j, mut both) = (0, 0, 0usize);
    while i < pa.len() && j < pb.len() {
        match pa[i].doc.cmp(&pb[j].doc) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                both += 1;
                i += 1;
                j += 1;
            }
        }
    }
    both as f64 / ((pa.len() * pb.len()) as f64).sqrt()
}

/// Fixed-point weighting of a verbose query.
///
/// Base evidence is `tf(w, dialog) · idf(w)` on the simplex. Each step mixes
/// it with support from associated terms,
/// `s'(w) = (1-δ)·base(w) + δ·Σ_{v≠w} sim(w,v)·s(v) / Σ_{v≠w} sim(w,v)`,
/// where a term with no associated mass keeps its base weight, and the result
/// is renormalized. Iteration stops once the L1 change drops below
/// `tolerance` or after `max_iterations` updates.
pub fn fixed_point_solve(
    index: &FieldedIndex,
    dialog: &Dialog,
    delta: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<FixedPointSolution> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("delta {delta} outside [0, 1)")));
    }
    let mut tf: BTreeMap<String, f64> = BTreeMap::new();
    for u in &dialog.utterances {
        for t in analyze(&u.text).terms {
            *tf.entry(t).or_insert(0.0) += 1.0;
        }
    }
    if tf.is_empty() {
        return Err(Error::Empty("dialog has no analyzable terms"));
    }
    let n = index.doc_count();
    let base = TermWeights::normalized(
        tf.iter()
            .map(|(t, c)| (t.clone(), c * idf(n, index.df(Field::Content, t)))),
    )?;
    let terms: Vec<&str> = base.weights.keys().map(String::as_str).collect();
    let b: Vec<f64> = base.weights.values().copied().collect();
    let k = terms.len();

    let mut sim = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let s = cooccurrence_similarity(index, terms[i], terms[j]);
            sim[i][j] = s;
            sim[j][i] = s;
        }
    }
    let mass: Vec<f64> = sim.iter().map(|r| r.iter().sum()).collect();

    let mut s = b.clone();
    let mut next = vec![0.0; k];
    let mut iterations = 0;
    let mut converged = delta == 0.0;
    while !converged && iterations < max_iterations {
        for w in 0..k {
            next[w] = if mass[w] > 0.0 {
                let support: f64 = sim[w].iter().zip(&s).map(|(a, b)| a * b).sum();
                (1.0 - delta) * b[w] + delta * support / mass[w]
            } else {
                b[w]
            };
        }
        let z: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= z);
        let change: f64 = s.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut s, &mut next);
        iterations += 1;
        converged = change < tolerance;
    }
    let weights = TermWeights {
        weights: terms.iter().map(|t| t.to_string()).zip(s).collect(),
    };
    Ok(FixedPointSolution {
        weights,
        base,
        iterations,
        converged,
    })
}

pub fn fixed_point_weights(
    index: &FieldedIndex,
    dialog: &Dialog,
    delta: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<TermWeights> {
    Ok(fixed_point_solve(index, dialog, delta, tolerance, max_iterations)?.weights)
}

/// Scores utterances from their words' fixed-point weights and position,
/// then pushes those scores back to the words.
///
/// `U_i = (i/n) · mean_{w ∈ t_i} fp(w)` over the distinct terms of the 1-based
/// utterance `i`; `final(w) ∝ fp(w) · Σ_{i: w ∈ t_i} U_i`. If every product is
/// zero, `fp` is returned unchanged.
pub fn utterance_biased_reweight(dialog: &Dialog, fp: &TermWeights) -> TermWeights {
    let n = dialog.utterances.len() as f64;
    let mut support: BTreeMap<&str, f64> = BTreeMap::new();
    let utterance_terms: Vec<BTreeSet<String>> = dialog
        .utterances
        .iter()
        .map(|u| analyze(&u.text).terms.into_iter().collect())
        .collect();
    for (i, terms) in utterance_terms.iter().enumerate() {
        if terms.is_empty() {
            continue;
        }
        let mean = terms.iter().map(|t| fp.get(t)).sum::<f64>() / terms.len() as f64;
        let score = (i + 1) as f64 / n * mean;
        for t in terms {
            if let Some((term, _)) = fp.weights.get_key_value(t.as_str()) {
                *support.entry(term.as_str()).or_insert(0.0) += score;
            }
        }
    }
    TermWeights::normalized(
        fp.iter()
            .map(|(t, w)| (t, w * support.get(t).copied().unwrap_or(0.0))),
    )
    .unwrap_or_else(|_| fp.clone())
}
