use crate::corpus::Dialog;
use crate::error::{Error, Result};
use crate::index::{QueryClause, WeightedQuery};
use crate::textproc::analyze;

/// One clause per utterance, weighted `i / (1 + 2 + ... + n)` for the 1-based
/// position `i`, so later turns weigh more and the weights sum to one.
/// Utterances with no analyzable terms contribute no clause.
pub fn utterance_query(dialog: &Dialog) -> Result<WeightedQuery> {
    let n = dialog.utterances.len();
    let denom = (n * (n + 1) / 2) as f64;
    let clauses: Vec<QueryClause> = dialog
        .utterances
        .iter()
        .enumerate()
        .filter_map(|(i, u)| {
            let terms = analyze(&u.text).terms;
            (!terms.is_empty()).then(|| QueryClause {
                terms,
                weight: (i + 1) as f64 / denom,
            })
        })
        .collect();
    if clauses.is_empty() {
        return Err(Error::Empty("dialog has no analyzable terms"));
    }
    WeightedQuery::from_clauses(clauses)
}
