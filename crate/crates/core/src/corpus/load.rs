use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;

use super::types::{Dialog, DialogRecord, Document, DocumentRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Dialog,
    Document,
}

/// A record that could not be ingested. `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordError {
    pub kind: RecordKind,
    pub line: usize,
    pub message: String,
}

/// Everything that was parsed, before any filtering.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub dialogs: Vec<Dialog>,
    pub documents: Vec<Document>,
    pub errors: Vec<RecordError>,
}

impl Corpus {
    pub fn document_map(&self) -> HashMap<&str, &Document> {
        self.documents.iter().map(|d| (d.doc_id.as_str(), d)).collect()
    }
}

/// Parses `dialogs.jsonl` records. Malformed lines are returned as errors
/// alongside the dialogs that did parse; blank lines are skipped.
pub fn read_dialogs<R: BufRead>(reader: R) -> Result<(Vec<Dialog>, Vec<RecordError>)> {
    let mut dialogs = Vec::new();
    let mut errors = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<dialogs>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| RecordError {
            kind: RecordKind::Dialog,
            line: i + 1,
            message,
        };
        match serde_json::from_str::<DialogRecord>(&line) {
            Ok(rec) => {
                if !seen.insert(rec.dialog_id.clone()) {
                    errors.push(err(format!("duplicate dialog_id `{}`", rec.dialog_id)));
                    continue;
                }
                let dialog = Dialog::from(rec);
                if dialog.utterances.is_empty() {
                    errors.push(err("dialog has no non-empty turns".into()));
                } else {
                    dialogs.push(dialog);
                }
            }
            Err(e) => errors.push(err(e.to_string())),
        }
    }
    Ok((dialogs, errors))
}

/// Parses `documents.jsonl` records. Empty content is a record error; a
/// repeated url is a hard error.
pub fn read_documents<R: BufRead>(reader: R) -> Result<(Vec<Document>, Vec<RecordError>)> {
    let mut documents = Vec::new();
    let mut errors = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<documents>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| RecordError {
            kind: RecordKind::Document,
            line: i + 1,
            message,
        };
        let rec = match serde_json::from_str::<DocumentRecord>(&line) {
            Ok(rec) => rec,
            Err(e) => {
                errors.push(err(e.to_string()));
                continue;
            }
        };
        if !seen.insert(rec.url.clone()) {
            return Err(Error::DuplicateDocument(rec.url));
        }
        match Document::new(rec.url, rec.content) {
            Ok(doc) => documents.push(doc),
            Err(e) => errors.push(err(e.to_string())),
        }
    }
    Ok((documents, errors))
}

pub fn load_corpus<D: BufRead, C: BufRead>(dialogs: D, documents: C) -> Result<Corpus> {
    let (dialogs, mut errors) = read_dialogs(dialogs)?;
    let (documents, doc_errors) = read_documents(documents)?;
    errors.extend(doc_errors);
    Ok(Corpus {
        dialogs,
        documents,
        errors,
    })
}

pub fn load_corpus_files(dialogs: &Path, documents: &Path) -> Result<Corpus> {
    let open = |p: &Path| {
        File::open(p)
            .map(BufReader::new)
            .map_err(|e| Error::io(p, e))
    };
    load_corpus(open(dialogs)?, open(documents)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIALOGS: &str = r#"{"dialog_id":"d1","turns":[{"speaker":"U","text":"my keyboard floats"},{"speaker":"A","text":"see https://support.example.com/kb/1"}],"gold_url":"https://support.example.com/kb/1"}
{"dialog_id":"d2","turns":[{"speaker":"U","text":"wifi drops"}],"gold_url":"https://support.example.com/kb/2"}

{"dialog_id":"d3","turns":[{"speaker":"U","text":"battery"}],"gold_url":"https://support.example.com/kb/2"}
"#;
    const DOCS: &str = r#"{"url":"https://support.example.com/kb/1","content":"Split keyboard on iPad"}
{"url":"https://support.example.com/kb/2","content":"Troubleshoot wifi"}
"#;

    #[test]
    fn well_formed_ingestion() {
        let c = load_corpus(DIALOGS.as_bytes(), DOCS.as_bytes()).unwrap();
        assert_eq!(c.dialogs.len(), 3);
        assert_eq!(c.documents.len(), 2);
        assert!(c.errors.is_empty());
    }

    #[test]
    fn missing_turns_is_record_error() {
        let input = format!("{DIALOGS}{}\n", r#"{"dialog_id":"d4","gold_url":"x"}"#);
        let c = load_corpus(input.as_bytes(), DOCS.as_bytes()).unwrap();
        assert_eq!(c.dialogs.len(), 3);
        assert_eq!(c.errors.len(), 1);
        assert_eq!(c.errors[0].line, 5);
        assert!(c.errors[0].message.contains("turns"));
    }

    #[test]
    fn duplicate_doc_is_hard_error() {
        let docs = format!("{DOCS}{}\n", r#"{"url":"https://support.example.com/kb/1","content":"again"}"#);
        assert!(matches!(
            load_corpus(DIALOGS.as_bytes(), docs.as_bytes()),
            Err(Error::DuplicateDocument(_))
        ));
    }

    #[test]
    fn empty_content_rejected_with_line() {
        let docs = format!("{DOCS}{}\n", r#"{"url":"https://support.example.com/login","content":"  "}"#);
        let c = load_corpus(DIALOGS.as_bytes(), docs.as_bytes()).unwrap();
        assert_eq!(c.documents.len(), 2);
        assert_eq!(c.errors[0].kind, RecordKind::Document);
        assert_eq!(c.errors[0].line, 3);
    }
}
