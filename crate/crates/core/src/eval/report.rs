use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::{mean_reciprocal_rank, recall_at_k, QueryResult};
use crate::error::Result;

/// Recall cut-offs reported in every table.
pub const REPORT_CUTOFFS: [usize; 4] = [1, 2, 5, 10];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMetrics {
    pub model: String,
    pub recall: Vec<(usize, f64)>,
    pub mrr: f64,
    pub queries: usize,
    pub failures: usize,
}

impl ModelMetrics {
    pub fn from_results(model: &str, results: &[QueryResult]) -> Result<Self> {
        Ok(ModelMetrics {
            model: model.to_owned(),
            recall: REPORT_CUTOFFS
                .iter()
                .map(|&k| Ok((k, recall_at_k(results, k)?)))
                .collect::<Result<_>>()?,
            mrr: mean_reciprocal_rank(results)?,
            queries: results.len(),
            failures: results.iter().filter(|r| r.error.is_some()).count(),
        })
    }

    pub fn recall_at(&self, k: usize) -> Option<f64> {
        self.recall.iter().find(|(c, _)| *c == k).map(|(_, v)| *v)
    }
}

/// Rows of models by columns of R@1, R@2, R@5, R@10, MRR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub rows: Vec<ModelMetrics>,
    /// Resolved configuration the rows were produced with.
    pub provenance: serde_json::Value,
}

impl MetricsReport {
    pub fn to_table(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.model.len())
            .chain(["Model".len()])
            .max()
            .unwrap_or(5);
        let mut out = format!("{:<width$}", "Model");
        for k in REPORT_CUTOFFS {
            let _ = write!(out, "  {:>6}", format!("R@{k}"));
        }
        let _ = writeln!(out, "  {:>6}  {:>7}", "MRR", "queries");
        for row in &self.rows {
            let _ = write!(out, "{:<width$}", row.model);
            for k in REPORT_CUTOFFS {
                let _ = write!(out, "  {:>6.3}", row.recall_at(k).unwrap_or(f64::NAN));
            }
            let _ = writeln!(out, "  {:>6.3}  {:>7}", row.mrr, row.queries);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
