use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::TermSequence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Smoothing {
    Mle,
    Dirichlet { mu: f64 },
}

/// Background distribution `p(w|C)` used for smoothing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CollectionModel {
    probs: BTreeMap<String, f64>,
}

impl CollectionModel {
    /// Normalizes raw collection frequencies into a distribution. Zero counts
    /// are dropped.
    pub fn from_counts<S, I>(counts: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, f64)>,
    {
        let mut probs = BTreeMap::new();
        for (term, count) in counts {
            if !count.is_finite() || count < 0.0 {
                return Err(Error::NonFinite("collection counts"));
            }
            if count > 0.0 {
                *probs.entry(term.into()).or_insert(0.0) += count;
            }
        }
        let total: f64 = probs.values().sum();
        if total <= 0.0 {
            return Err(Error::Empty("collection model"));
        }
        probs.values_mut().for_each(|p| *p /= total);
        Ok(CollectionModel { probs })
    }

    pub fn prob(&self, term: &str) -> f64 {
        self.probs.get(term).copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.probs.iter().map(|(t, &p)| (t.as_str(), p))
    }
}

/// A unigram distribution over terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageModel {
    probs: BTreeMap<String, f64>,
    smoothing: Smoothing,
}

impl LanguageModel {
    /// Wraps an explicit distribution. Values must be non-negative and sum to 1.
    pub fn from_probabilities<S, I>(probs: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, f64)>,
    {
        let probs: BTreeMap<String, f64> = probs
            .into_iter()
            .map(|(t, p)| (t.into(), p))
            .filter(|&(_, p)| p != 0.0)
            .collect();
        if probs.values().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::NonFinite("language model"));
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(LanguageModel {
            probs,
            smoothing: Smoothing::Mle,
        })
    }

    pub fn prob(&self, term: &str) -> f64 {
        self.probs.get(term).copied().unwrap_or(0.0)
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.probs.iter().map(|(t, &p)| (t.as_str(), p))
    }
}

/// Estimates a unigram model from `terms`.
///
/// MLE gives `tf(w)/len`. Dirichlet gives `(tf(w) + mu * p(w|C)) / (len + mu)`
/// over the union of the sequence's terms and the collection support.
pub fn estimate_lm(
    terms: &TermSequence,
    collection: Option<&CollectionModel>,
    smoothing: Smoothing,
) -> Result<LanguageModel> {
    let mut tf: BTreeMap<&str, f64> = BTreeMap::new();
    for t in terms.iter() {
        *tf.entry(t).or_insert(0.0) += 1.0;
    }
    let len = terms.len() as f64;
    let probs = match smoothing {
        Smoothing::Mle => {
            if terms.is_empty() {
                return Err(Error::Empty("term sequence for MLE estimate"));
            }
            tf.into_iter().map(|(t, c)| (t.to_owned(), c / len)).collect()
        }
        Smoothing::Dirichlet { mu } => {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "Dirichlet mu must be positive, got {mu}"
                )));
            }
            let collection = match collection {
                Some(c) if !c.is_empty() => c,
                _ => return Err(Error::Empty("collection model for Dirichlet smoothing")),
            };
            let mut probs: BTreeMap<String, f64> = collection
                .iter()
                .map(|(t, p)| (t.to_owned(), mu * p / (len + mu)))
                .collect();
            for (t, c) in tf {
                let pc = collection.prob(t);
                probs.insert(t.to_owned(), (c + mu * pc) / (len + mu));
            }
            probs
        }
    };
    Ok(LanguageModel { probs, smoothing })
}

/// Bhattacharyya coefficient `sum_w sqrt(p(w) q(w))`, clamped to `[0, 1]`.
pub fn bhattacharyya(p: &LanguageModel, q: &LanguageModel) -> f64 {
    // Merge-walk in term order so the sum is bit-identical for (p, q) and (q, p).
    let mut a = p.probs.iter().peekable();
    let mut b = q.probs.iter().peekable();
    let mut sum = 0.0;
    while let (Some((ta, pa)), Some((tb, pb))) = (a.peek(), b.peek()) {
        match ta.cmp(tb) {
            std::cmp::Ordering::Less => {
                a.next();
            }
            std::cmp::Ordering::Greater => {
                b.next();
            }
            std::cmp::Ordering::Equal => {
                sum += (*pa * *pb).sqrt();
                a.next();
                b.next();
            }
        }
    }
    sum.clamp(0.0, 1.0)
}
