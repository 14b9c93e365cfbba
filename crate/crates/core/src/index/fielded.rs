use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::bm25::Bm25Params;
use crate::corpus::{Dialog, Document};
use crate::error::{Error, Result};
use crate::textproc::analyze;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Content,
    Anchor,
}

impl Field {
    pub const ALL: [Field; 2] = [Field::Content, Field::Anchor];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct FieldData {
    /// Indexed by term id; each list sorted by doc.
    pub(crate) postings: Vec<Vec<Posting>>,
    /// Indexed by doc; each list sorted by term id.
    pub(crate) forward: Vec<Vec<(u32, u32)>>,
    pub(crate) doc_len: Vec<u64>,
    pub(crate) total_len: u64,
}

impl FieldData {
    pub(crate) fn from_forward(forward: Vec<Vec<(u32, u32)>>, num_terms: usize) -> Self {
        let mut postings = vec![Vec::new(); num_terms];
        let mut doc_len = Vec::with_capacity(forward.len());
        for (doc, terms) in forward.iter().enumerate() {
            let mut len = 0u64;
            for &(term, tf) in terms {
                postings[term as usize].push(Posting {
                    doc: doc as u32,
                    tf,
                });
                len += u64::from(tf);
            }
            doc_len.push(len);
        }
        let total_len = doc_len.iter().sum();
        FieldData {
            postings,
            forward,
            doc_len,
            total_len,
        }
    }
}

/// Immutable once built; share it freely across threads.
#[derive(Debug, Clone)]
pub struct FieldedIndex {
    pub(crate) doc_ids: Vec<String>,
    pub(crate) doc_lookup: HashMap<String, u32>,
    pub(crate) terms: Vec<String>,
    pub(crate) term_lookup: HashMap<String, u32>,
    pub(crate) content: FieldData,
    pub(crate) anchor: FieldData,
    pub(crate) params: Bm25Params,
}

impl FieldedIndex {
    pub(crate) fn field(&self, field: Field) -> &FieldData {
        match field {
            Field::Content => &self.content,
            Field::Anchor => &self.anchor,
        }
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }

    pub fn with_params(mut self, params: Bm25Params) -> Self {
        self.params = params;
        self
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_index(&self, doc_id: &str) -> Option<u32> {
        self.doc_lookup.get(doc_id).copied()
    }

    pub fn doc_id(&self, doc: u32) -> &str {
        &self.doc_ids[doc as usize]
    }

    pub fn term_id(&self, term: &str) -> Option<u32> {
        self.term_lookup.get(term).copied()
    }

    pub fn term(&self, id: u32) -> &str {
        &self.terms[id as usize]
    }

    pub fn postings(&self, field: Field, term: u32) -> &[Posting] {
        self.field(field)
            .postings
            .get(term as usize)
            .map_or(&[], Vec::as_slice)
    }

    /// `(term id, tf)` pairs of one document field, sorted by term id.
    pub fn doc_terms(&self, field: Field, doc: u32) -> &[(u32, u32)] {
        &self.field(field).forward[doc as usize]
    }

    pub fn df(&self, field: Field, term: &str) -> usize {
        self.term_id(term)
            .map_or(0, |t| self.postings(field, t).len())
    }

    pub fn tf(&self, field: Field, term: u32, doc: u32) -> u32 {
        let fwd = &self.field(field).forward[doc as usize];
        fwd.binary_search_by_key(&term, |&(t, _)| t)
            .map_or(0, |i| fwd[i].1)
    }

    pub fn doc_len(&self, field: Field, doc: u32) -> u64 {
        self.field(field).doc_len[doc as usize]
    }

    /// Total number of term occurrences in a field.
    pub fn total_len(&self, field: Field) -> u64 {
        self.field(field).total_len
    }

    pub fn avg_len(&self, field: Field) -> f64 {
        if self.doc_ids.is_empty() {
            0.0
        } else {
            self.field(field).total_len as f64 / self.doc_ids.len() as f64
        }
    }

    /// Occurrences of `term` across the whole field.
    pub fn collection_frequency(&self, field: Field, term: u32) -> u64 {
        self.postings(field, term)
            .iter()
            .map(|p| u64::from(p.tf))
            .sum()
    }

    fn intern(&mut self, term: &str) -> u32 {
        if let Some(&id) = self.term_lookup.get(term) {
            return id;
        }
        let id = self.terms.len() as u32;
        self.terms.push(term.to_owned());
        self.term_lookup.insert(term.to_owned(), id);
        id
    }

    pub(crate) fn from_parts(
        doc_ids: Vec<String>,
        terms: Vec<String>,
        content: Vec<Vec<(u32, u32)>>,
        anchor: Vec<Vec<(u32, u32)>>,
        params: Bm25Params,
    ) -> Result<Self> {
        let mut doc_lookup = HashMap::with_capacity(doc_ids.len());
        for (i, id) in doc_ids.iter().enumerate() {
            if doc_lookup.insert(id.clone(), i as u32).is_some() {
                return Err(Error::DuplicateDocument(id.clone()));
            }
        }
        let term_lookup = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Ok(FieldedIndex {
            content: FieldData::from_forward(content, terms.len()),
            anchor: FieldData::from_forward(anchor, terms.len()),
            doc_ids,
            doc_lookup,
            terms,
            term_lookup,
            params,
        })
    }
}

fn count_terms(index: &mut FieldedIndex, text: &str, into: &mut BTreeMap<u32, u32>) {
    for term in analyze(text).iter() {
        *into.entry(index.intern(term)).or_insert(0) += 1;
    }
}

/// Indexes document content. The anchor field starts empty.
pub fn build_index(documents: &[Document]) -> Result<FieldedIndex> {
    if documents.is_empty() {
        return Err(Error::Empty("document list"));
    }
    let mut index = FieldedIndex::from_parts(
        documents.iter().map(|d| d.doc_id.clone()).collect(),
        Vec::new(),
        Vec::new(),
        Vec::new(),
        Bm25Params::default(),
    )?;
    let mut content = Vec::with_capacity(documents.len());
    for doc in documents {
        let mut counts = BTreeMap::new();
        count_terms(&mut index, &doc.content, &mut counts);
        content.push(counts.into_iter().collect());
    }
    let n = index.terms.len();
    index.content = FieldData::from_forward(content, n);
    index.anchor = FieldData::from_forward(vec![Vec::new(); documents.len()], n);
    Ok(index)
}

/// Appends each dialog's full text to the anchor field of its gold document.
/// Only pass training dialogs here.
pub fn attach_anchor_text(mut index: FieldedIndex, dialogs: &[Dialog]) -> Result<FieldedIndex> {
    let mut anchor: Vec<BTreeMap<u32, u32>> = index
        .anchor
        .forward
        .iter()
        .map(|f| f.iter().copied().collect())
        .collect();
    for dialog in dialogs {
        let doc = index
            .doc_index(&dialog.gold_url)
            .ok_or_else(|| Error::UnknownDocument(dialog.gold_url.clone()))?;
        count_terms(&mut index, &dialog.context_text(), &mut anchor[doc as usize]);
    }
    let n = index.terms.len();
    let content = std::mem::take(&mut index.content.forward);
    index.content = FieldData::from_forward(content, n);
    index.anchor = FieldData::from_forward(
        anchor.into_iter().map(|m| m.into_iter().collect()).collect(),
        n,
    );
    Ok(index)
}
