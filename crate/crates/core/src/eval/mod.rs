//! Recall@k, MRR, and the experiment runner.

mod metrics;
mod report;
mod runner;

pub use metrics::{mean_reciprocal_rank, recall_at_k, QueryResult};
pub use report::{MetricsReport, ModelMetrics, REPORT_CUTOFFS};
pub use runner::{run_experiment, write_results, ExperimentRun};
