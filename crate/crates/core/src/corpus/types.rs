use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::analyze;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Speaker {
    #[serde(rename = "U")]
    User,
    #[serde(rename = "A")]
    Agent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    pub speaker: Speaker,
    pub text: String,
    pub index: usize,
}

/// A customer-care dialog and the document the agent linked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dialog {
    pub dialog_id: String,
    pub utterances: Vec<Utterance>,
    pub gold_url: String,
}

impl Dialog {
    /// Builds a dialog from `(speaker, text)` turns. Text is whitespace
    /// normalized and turns that end up empty are dropped.
    pub fn new<I, S>(dialog_id: impl Into<String>, turns: I, gold_url: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = (Speaker, S)>,
        S: AsRef<str>,
    {
        let utterances = turns
            .into_iter()
            .filter_map(|(speaker, text)| {
                let text = normalize_whitespace(text.as_ref());
                (!text.is_empty()).then_some((speaker, text))
            })
            .enumerate()
            .map(|(index, (speaker, text))| Utterance {
                speaker,
                text,
                index,
            })
            .collect();
        Dialog {
            dialog_id: dialog_id.into(),
            utterances,
            gold_url: gold_url.into(),
        }
    }

    /// Concatenated dialog context, one utterance per line.
    pub fn context_text(&self) -> String {
        self.utterances
            .iter()
            .map(|u| u.text.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub(crate) fn reindex(&mut self) {
        for (i, u) in self.utterances.iter_mut().enumerate() {
            u.index = i;
        }
    }
}

/// A knowledge-base document: its URL and pre-extracted text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub content: String,
    pub token_count: usize,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, content: impl Into<String>) -> Result<Self> {
        let doc_id = doc_id.into();
        let content = content.into();
        if content.trim().is_empty() {
            return Err(Error::Empty("document content"));
        }
        if doc_id.trim().is_empty() {
            return Err(Error::Empty("document url"));
        }
        let token_count = analyze(&content).len();
        Ok(Document {
            doc_id,
            content,
            token_count,
        })
    }
}

/// One line of `dialogs.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogRecord {
    pub dialog_id: String,
    pub turns: Vec<TurnRecord>,
    pub gold_url: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub speaker: Speaker,
    pub text: String,
}

/// One line of `documents.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub url: String,
    pub content: String,
}

impl From<DialogRecord> for Dialog {
    fn from(r: DialogRecord) -> Self {
        Dialog::new(
            r.dialog_id,
            r.turns.into_iter().map(|t| (t.speaker, t.text)),
            r.gold_url,
        )
    }
}

impl From<&Dialog> for DialogRecord {
    fn from(d: &Dialog) -> Self {
        DialogRecord {
            dialog_id: d.dialog_id.clone(),
            turns: d
                .utterances
                .iter()
                .map(|u| TurnRecord {
                    speaker: u.speaker,
                    text: u.text.clone(),
                })
                .collect(),
            gold_url: d.gold_url.clone(),
        }
    }
}

impl From<&Document> for DocumentRecord {
    fn from(d: &Document) -> Self {
        DocumentRecord {
            url: d.doc_id.clone(),
            content: d.content.clone(),
        }
    }
}

pub(crate) fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
