use std::collections::{BTreeMap, HashSet};
use std::ops::Range;
use std::sync::OnceLock;

use regex::Regex;
use serde::Serialize;

use super::load::Corpus;
use super::types::{normalize_whitespace, Dialog, Document, Speaker};
use crate::error::{Error, Result};

/// URL prefixes considered in-domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainAllowlist {
    prefixes: Vec<String>,
}

impl DomainAllowlist {
    pub fn new<I, S>(prefixes: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut prefixes: Vec<String> = prefixes
            .into_iter()
            .map(Into::into)
            .filter(|p| !p.is_empty())
            .collect();
        if prefixes.is_empty() {
            return Err(Error::InvalidArgument(
                "empty domain allowlist would remove every dialog".into(),
            ));
        }
        prefixes.sort();
        prefixes.dedup();
        Ok(DomainAllowlist { prefixes })
    }

    /// Allowlist of every `scheme://host/` that appears in the document pool.
    pub fn from_documents(documents: &[Document]) -> Result<Self> {
        Self::new(documents.iter().filter_map(|d| origin_prefix(&d.doc_id)))
    }

    pub fn allows(&self, url: &str) -> bool {
        self.prefixes.iter().any(|p| url.starts_with(p.as_str()))
    }

    pub fn prefixes(&self) -> &[String] {
        &self.prefixes
    }
}

fn origin_prefix(url: &str) -> Option<String> {
    let scheme_end = url.find("://")? + 3;
    let host_end = url[scheme_end..]
        .find('/')
        .map_or(url.len(), |i| scheme_end + i);
    Some(format!("{}/", &url[..host_end]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterRule {
    /// No agent utterance carries a URL and the record has no label.
    NoAgentUrl,
    /// The linked URL is outside the allowlist.
    OutOfDomain,
    /// The linked URL has no (valid) document in the pool.
    UnresolvedUrl,
    /// Nothing left after truncation.
    EmptyDialog,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub input: usize,
    pub kept: usize,
    pub removed: BTreeMap<FilterRule, usize>,
}

fn url_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"https?://\S+").expect("valid url regex"))
}

/// Byte spans of `http://` / `https://` URLs in `text`, trailing punctuation
/// excluded.
pub fn find_urls(text: &str) -> Vec<Range<usize>> {
    url_regex()
        .find_iter(text)
        .filter_map(|m| {
            let trimmed = m
                .as_str()
                .trim_end_matches(['.', ',', ';', ':', '!', '?', ')', ']', '}', '>', '"', '\'']);
            let end = m.start() + trimmed.len();
            // a bare scheme is not a URL
            (trimmed.len() > trimmed.find("://").unwrap_or(0) + 3).then_some(m.start()..end)
        })
        .collect()
}

/// Applies the dataset validity rules and truncates each surviving dialog at
/// its first URL-bearing agent utterance.
///
/// The first URL of that utterance becomes the dialog's label and every URL
/// is removed from its text. A dialog whose agent turns carry no URL keeps its
/// recorded `gold_url` (this is what makes filtering idempotent). Dialogs are
/// dropped when they have no label, the label is not allowlisted, or the label
/// does not resolve in the document pool.
pub fn filter_dialogs(corpus: Corpus, allowlist: &DomainAllowlist) -> (Corpus, FilterReport) {
    let pool: HashSet<&str> = corpus.documents.iter().map(|d| d.doc_id.as_str()).collect();
    let mut report = FilterReport {
        input: corpus.dialogs.len(),
        ..Default::default()
    };
    let mut kept = Vec::with_capacity(corpus.dialogs.len());
    for dialog in corpus.dialogs.iter() {
        match filter_one(dialog.clone(), allowlist, &pool) {
            Ok(d) => kept.push(d),
            Err(rule) => *report.removed.entry(rule).or_insert(0) += 1,
        }
    }
    report.kept = kept.len();
    let Corpus {
        documents, errors, ..
    } = corpus;
    (
        Corpus {
            dialogs: kept,
            documents,
            errors,
        },
        report,
    )
}

fn filter_one(
    mut dialog: Dialog,
    allowlist: &DomainAllowlist,
    pool: &HashSet<&str>,
) -> std::result::Result<Dialog, FilterRule> {
    let first_link = dialog.utterances.iter().enumerate().find_map(|(i, u)| {
        if u.speaker != Speaker::Agent {
            return None;
        }
        let urls = find_urls(&u.text);
        (!urls.is_empty()).then_some((i, urls))
    });
    match first_link {
        Some((i, urls)) => {
            dialog.gold_url = dialog.utterances[i].text[urls[0].clone()].to_owned();
            dialog.utterances.truncate(i + 1);
            let text = &dialog.utterances[i].text;
            let mut stripped = String::with_capacity(text.len());
            let mut last = 0;
            for span in &urls {
                stripped.push_str(&text[last..span.start]);
                stripped.push(' ');
                last = span.end;
            }
            stripped.push_str(&text[last..]);
            let stripped = normalize_whitespace(&stripped);
            if stripped.is_empty() {
                dialog.utterances.pop();
            } else {
                dialog.utterances[i].text = stripped;
            }
            dialog.reindex();
        }
        None if dialog.gold_url.trim().is_empty() => return Err(FilterRule::NoAgentUrl),
        None => {}
    }
    if !allowlist.allows(&dialog.gold_url) {
        return Err(FilterRule::OutOfDomain);
    }
    if !pool.contains(dialog.gold_url.as_str()) {
        return Err(FilterRule::UnresolvedUrl);
    }
    if dialog.utterances.is_empty() {
        return Err(FilterRule::EmptyDialog);
    }
    Ok(dialog)
}
