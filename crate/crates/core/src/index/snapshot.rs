//! JSON snapshot of a [`FieldedIndex`].
//!
//! ```text
//! {
//!   "format": "docpredict-index",
//!   "version": 1,
//!   "bm25": {"k1": 1.2, "b": 0.75},
//!   "terms": ["keyboard", ...],                  // term id = position
//!   "documents": [
//!     {"doc_id": "https://...", "content": [[term_id, tf], ...],
//!      "anchor": [[term_id, tf], ...]},
//!     ...
//!   ]
//! }
//! ```
//!
//! Only integer counts are stored; postings, lengths and averages are rebuilt
//! on load, so a loaded index scores bit-identically to the one saved.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::bm25::Bm25Params;
use super::fielded::FieldedIndex;
use crate::error::{Error, Result};

pub const SNAPSHOT_FORMAT: &str = "docpredict-index";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Snapshot {
    format: String,
    version: u32,
    bm25: Bm25Params,
    terms: Vec<String>,
    documents: Vec<SnapshotDoc>,
}

#[derive(Serialize, Deserialize)]
struct SnapshotDoc {
    doc_id: String,
    content: Vec<(u32, u32)>,
    anchor: Vec<(u32, u32)>,
}

impl FieldedIndex {
    pub fn save<W: Write>(&self, writer: W) -> Result<()> {
        let snap = Snapshot {
            format: SNAPSHOT_FORMAT.into(),
            version: SNAPSHOT_VERSION,
            bm25: self.params,
            terms: self.terms.clone(),
            documents: self
                .doc_ids
                .iter()
                .enumerate()
                .map(|(i, id)| SnapshotDoc {
                    doc_id: id.clone(),
                    content: self.content.forward[i].clone(),
                    anchor: self.anchor.forward[i].clone(),
                })
                .collect(),
        };
        let mut w = BufWriter::new(writer);
        serde_json::to_writer(&mut w, &snap)?;
        w.write_all(b"\n").map_err(|e| Error::io("<index>", e))?;
        w.flush().map_err(|e| Error::io("<index>", e))
    }

    pub fn load<R: Read>(reader: R) -> Result<Self> {
        let snap: Snapshot = serde_json::from_reader(BufReader::new(reader))?;
        if snap.format != SNAPSHOT_FORMAT {
            return Err(Error::Snapshot(format!("unexpected format `{}`", snap.format)));
        }
        if snap.version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!(
                "unsupported version {} (expected {SNAPSHOT_VERSION})",
                snap.version
            )));
        }
        let n_terms = snap.terms.len() as u32;
        let mut doc_ids = Vec::with_capacity(snap.documents.len());
        let mut content = Vec::with_capacity(snap.documents.len());
        let mut anchor = Vec::with_capacity(snap.documents.len());
        for d in snap.documents {
            for list in [&d.content, &d.anchor] {
                let sorted = list.windows(2).all(|w| w[0].0 < w[1].0);
                if !sorted || list.iter().any(|&(t, tf)| t >= n_terms || tf == 0) {
                    return Err(Error::Snapshot(format!("corrupt term list for `{}`", d.doc_id)));
                }
            }
            doc_ids.push(d.doc_id);
            content.push(d.content);
            anchor.push(d.anchor);
        }
        FieldedIndex::from_parts(doc_ids, snap.terms, content, anchor, snap.bm25)
    }

    pub fn save_to_path(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.save(file)
    }

    pub fn load_from_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::load(file)
    }
}
