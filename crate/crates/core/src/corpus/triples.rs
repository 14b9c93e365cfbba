use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::types::{Dialog, Document};
use crate::error::{Error, Result};

/// Negatives per dialog used unless configured otherwise.
pub const DEFAULT_NEGATIVES: usize = 4;

/// `(dialog, document, label)` for training a pairwise matcher.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingTriple {
    pub dialog_id: String,
    pub doc_id: String,
    pub label: u8,
}

/// One positive plus `num_negatives` distinct non-gold documents per dialog.
///
/// Each dialog draws from its own RNG keyed on `(seed, dialog_id)`, so the
/// output for a dialog does not depend on which other dialogs are exported.
pub fn export_triples(
    dialogs: &[Dialog],
    pool: &[Document],
    num_negatives: usize,
    seed: u64,
) -> Result<Vec<TrainingTriple>> {
    if num_negatives == 0 {
        return Err(Error::InvalidArgument("num_negatives must be at least 1".into()));
    }
    if pool.len() <= num_negatives {
        return Err(Error::InvalidArgument(format!(
            "pool of {} documents cannot supply {num_negatives} distinct negatives",
            pool.len()
        )));
    }
    let mut ids: Vec<&str> = pool.iter().map(|d| d.doc_id.as_str()).collect();
    ids.sort_unstable();

    let mut out = Vec::with_capacity(dialogs.len() * (num_negatives + 1));
    for dialog in dialogs {
        let gold = ids
            .binary_search(&dialog.gold_url.as_str())
            .map_err(|_| Error::UnknownDocument(dialog.gold_url.clone()))?;
        out.push(TrainingTriple {
            dialog_id: dialog.dialog_id.clone(),
            doc_id: dialog.gold_url.clone(),
            label: 1,
        });
        let mut rng = dialog_rng(seed, &dialog.dialog_id);
        for i in rand::seq::index::sample(&mut rng, ids.len() - 1, num_negatives) {
            let j = if i >= gold { i + 1 } else { i };
            out.push(TrainingTriple {
                dialog_id: dialog.dialog_id.clone(),
                doc_id: ids[j].to_owned(),
                label: 0,
            });
        }
    }
    Ok(out)
}

fn dialog_rng(seed: u64, dialog_id: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(dialog_id.as_bytes());
    let digest: [u8; 32] = h.finalize().into();
    ChaCha8Rng::from_seed(digest)
}

/// Writes triples as JSON lines.
pub fn write_triples<W: Write>(mut w: W, triples: &[TrainingTriple]) -> std::io::Result<()> {
    for t in triples {
        serde_json::to_writer(&mut w, t)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}
