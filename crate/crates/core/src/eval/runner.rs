use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::metrics::QueryResult;
use super::report::{MetricsReport, ModelMetrics};
use crate::corpus::Dialog;
use crate::error::{Error, Result};
use crate::index::RankedList;

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub report: MetricsReport,
    pub results: Vec<QueryResult>,
}

/// Ranks every dialog (in parallel) and aggregates metrics. A ranker error is
/// recorded on its query, which then counts as a miss; the run continues.
/// Results keep the input dialog order, so output is deterministic.
pub fn run_experiment<F>(
    model: &str,
    ranker: F,
    dialogs: &[Dialog],
    provenance: serde_json::Value,
) -> Result<ExperimentRun>
where
    F: Fn(&Dialog) -> Result<RankedList> + Sync,
{
    if dialogs.is_empty() {
        return Err(Error::Empty("evaluation dialogs"));
    }
    let results: Vec<QueryResult> = dialogs
        .par_iter()
        .map(|d| match ranker(d) {
            Ok(ranking) => QueryResult::from_ranking(&d.dialog_id, &d.gold_url, &ranking),
            Err(e) => QueryResult::failed(&d.dialog_id, &d.gold_url, e.to_string()),
        })
        .collect();
    let report = MetricsReport {
        rows: vec![ModelMetrics::from_results(model, &results)?],
        provenance,
    };
    Ok(ExperimentRun { report, results })
}

#[derive(Serialize)]
struct PersistedResult<'a> {
    dialog_id: &'a str,
    gold: &'a str,
    gold_rank: Option<usize>,
    top: &'a [String],
    provenance: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

/// Per-query results as JSON lines, keeping the top `keep` documents of each
/// ranking.
pub fn write_results<W: Write>(mut w: W, results: &[QueryResult], keep: usize) -> std::io::Result<()> {
    for r in results {
        let rec = PersistedResult {
            dialog_id: &r.dialog_id,
            gold: &r.gold,
            gold_rank: r.gold_rank,
            top: &r.ranked[..r.ranked.len().min(keep)],
            provenance: &r.provenance,
            error: r.error.as_deref(),
        };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}
