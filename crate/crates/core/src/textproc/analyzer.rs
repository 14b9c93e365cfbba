use std::collections::HashSet;
use std::ops::Range;
use std::sync::OnceLock;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

/// Versioned English stopword list, one term per line.
pub const ENGLISH_STOPWORDS: &str = include_str!("../../resources/stopwords_en.txt");

/// Normalized terms with the byte span each one came from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSequence {
    pub terms: Vec<String>,
    pub spans: Vec<Range<usize>>,
}

impl TermSequence {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }
}

/// Tokenizer + lowercase + stopword filter + stemmer.
pub struct Analyzer {
    stopwords: HashSet<String>,
    stemmer: Stemmer,
}

impl Analyzer {
    /// The default English analyzer with the shipped stopword list.
    pub fn english() -> &'static Analyzer {
        static ENGLISH: OnceLock<Analyzer> = OnceLock::new();
        ENGLISH.get_or_init(|| Analyzer::with_stopwords(ENGLISH_STOPWORDS))
    }

    /// Builds an analyzer from a stopword resource (one term per line, `#`
    /// comments and blank lines ignored).
    pub fn with_stopwords(list: &str) -> Analyzer {
        let stopwords = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Analyzer {
            stopwords,
            stemmer: Stemmer::create(Algorithm::English),
        }
    }

    pub fn is_stopword(&self, term: &str) -> bool {
        self.stopwords.contains(term)
    }

    pub fn analyze(&self, text: &str) -> TermSequence {
        let mut out = TermSequence::default();
        for span in raw_tokens(text) {
            let Some(normalized) = normalize(&text[span.clone()]) else {
                continue;
            };
            if self.stopwords.contains(&normalized) {
                continue;
            }
            let stemmed: String = self
                .stemmer
                .stem(&normalized)
                .chars()
                .filter(|c| !c.is_uppercase() && !c.is_whitespace())
                .collect();
            if stemmed.is_empty() {
                continue;
            }
            out.terms.push(stemmed);
            out.spans.push(span);
        }
        out
    }
}

/// Analyzes `text` with the default English analyzer.
pub fn analyze(text: &str) -> TermSequence {
    Analyzer::english().analyze(text)
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Maximal runs of alphanumerics, allowing apostrophes inside a word.
fn raw_tokens(text: &str) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let inner_apostrophe = is_apostrophe(c)
            && start.is_some()
            && chars.peek().is_some_and(|&(_, n)| n.is_alphanumeric());
        if c.is_alphanumeric() || inner_apostrophe {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            spans.push(s..i);
        }
    }
    if let Some(s) = start {
        spans.push(s..text.len());
    }
    spans
}

fn normalize(token: &str) -> Option<String> {
    let mut lower: String = token.chars().flat_map(char::to_lowercase).collect();
    // possessive
    for suffix in ["'s", "\u{2019}s"] {
        if lower.len() > suffix.len() && lower.ends_with(suffix) {
            lower.truncate(lower.len() - suffix.len());
        }
    }
    let cleaned: String = lower
        .chars()
        .filter(|&c| !is_apostrophe(c) && !c.is_uppercase())
        .collect();
    (!cleaned.is_empty()).then_some(cleaned)
}
