use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::analyze;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryClause {
    pub terms: Vec<String>,
    pub weight: f64,
}

/// A disjunction of weighted clauses, with the equivalent flat term weights
/// (`sum over clauses of clause weight * within-clause tf`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WeightedQuery {
    clauses: Vec<QueryClause>,
    flat: BTreeMap<String, f64>,
}

impl WeightedQuery {
    pub fn from_clauses(clauses: Vec<QueryClause>) -> Result<Self> {
        let mut flat = BTreeMap::new();
        for c in &clauses {
            if !c.weight.is_finite() || c.weight < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "clause weight must be finite and non-negative, got {}",
                    c.weight
                )));
            }
            for t in &c.terms {
                *flat.entry(t.clone()).or_insert(0.0) += c.weight;
            }
        }
        Ok(WeightedQuery { clauses, flat })
    }

    /// One single-term clause per entry.
    pub fn from_term_weights<S, I>(weights: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, f64)>,
    {
        Self::from_clauses(
            weights
                .into_iter()
                .map(|(t, w)| QueryClause {
                    terms: vec![t.into()],
                    weight: w,
                })
                .collect(),
        )
    }

    /// The whole text as a single clause of weight 1.
    pub fn from_text(text: &str) -> Self {
        Self::from_clauses(vec![QueryClause {
            terms: analyze(text).terms,
            weight: 1.0,
        }])
        .expect("unit weight is valid")
    }

    pub fn clauses(&self) -> &[QueryClause] {
        &self.clauses
    }

    /// Flattened term weights, in term order.
    pub fn term_weights(&self) -> &BTreeMap<String, f64> {
        &self.flat
    }

    pub fn weight(&self, term: &str) -> f64 {
        self.flat.get(term).copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.flat.values().all(|&w| w == 0.0)
    }

    /// Flat weights scaled to sum to one (empty map if all weights are zero).
    pub fn normalized_weights(&self) -> BTreeMap<String, f64> {
        let total: f64 = self.flat.values().sum();
        if total <= 0.0 {
            return BTreeMap::new();
        }
        self.flat.iter().map(|(t, w)| (t.clone(), w / total)).collect()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_clauses(
            self.clauses
                .iter()
                .map(|c| QueryClause {
                    terms: c.terms.clone(),
                    weight: c.weight * factor,
                })
                .collect(),
        )
    }
}
