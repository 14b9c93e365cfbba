//! Generated corpora for tests, benchmarks and the tutorial.

use std::io::Write;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{
    filter_dialogs, load_corpus, Corpus, CorpusSplit, DialogRecord, DocumentRecord, DomainAllowlist, FilterReport,
    Speaker, SplitAssignment, TurnRecord,
};
use crate::error::Result;

/// Raw records plus a fixed train/test assignment.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub documents: Vec<DocumentRecord>,
    pub dialogs: Vec<DialogRecord>,
    pub split: SplitAssignment,
}

impl SyntheticCorpus {
    pub fn write_documents<W: Write>(&self, w: W) -> Result<()> {
        write_jsonl(w, &self.documents)
    }

    pub fn write_dialogs<W: Write>(&self, w: W) -> Result<()> {
        write_jsonl(w, &self.dialogs)
    }

    /// Runs the records through the same load and filter steps as real data
    /// and applies the split.
    pub fn ingest(&self) -> Result<(Corpus, CorpusSplit, FilterReport)> {
        let (mut dialogs, mut documents) = (Vec::new(), Vec::new());
        self.write_dialogs(&mut dialogs)?;
        self.write_documents(&mut documents)?;
        let corpus = load_corpus(dialogs.as_slice(), documents.as_slice())?;
        let allow = DomainAllowlist::from_documents(&corpus.documents)?;
        let (corpus, report) = filter_dialogs(corpus, &allow);
        let split = CorpusSplit::from_assignment(&corpus, &self.split)?;
        Ok((corpus, split, report))
    }

    pub fn write_split<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.split)?;
        writeln!(w).map_err(|e| crate::Error::io("<split>", e))
    }
}

fn write_jsonl<W: Write, T: serde::Serialize>(mut w: W, rows: &[T]) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w).map_err(|e| crate::Error::io("<jsonl>", e))?;
    }
    Ok(())
}

pub fn doc_url(i: usize) -> String {
    format!("https://help.example.com/kb/{i:04}")
}

const FILLER_USER: &[&str] = &["hello", "please", "help", "thanks", "problem", "again"];
const FILLER_AGENT: &[&str] = &["sure", "check", "sorry", "moment", "look", "welcome"];

fn raw_dialog(
    id: String,
    user_words: &[String],
    rng: &mut ChaCha8Rng,
    gold: usize,
) -> DialogRecord {
    let filler = |rng: &mut ChaCha8Rng, pool: &[&str], n: usize| {
        pool.choose_multiple(rng, n).copied().collect::<Vec<_>>().join(" ")
    };
    let half = user_words.len() / 2;
    let turns = vec![
        TurnRecord {
            speaker: Speaker::User,
            text: format!("{} {}", filler(rng, FILLER_USER, 2), user_words[..half].join(" ")),
        },
        TurnRecord {
            speaker: Speaker::Agent,
            text: filler(rng, FILLER_AGENT, 3),
        },
        TurnRecord {
            speaker: Speaker::User,
            text: format!("{} {}", user_words[half..].join(" "), filler(rng, FILLER_USER, 1)),
        },
        TurnRecord {
            speaker: Speaker::Agent,
            text: format!("{} this article {} should fix it", filler(rng, FILLER_AGENT, 1), doc_url(gold)),
        },
    ];
    DialogRecord {
        dialog_id: id,
        turns,
        gold_url: String::new(),
    }
}

/// Documents are written in one vocabulary (`cNNNkJ`) and dialogs in a
/// disjoint one (`uNNNqJ`), so content alone cannot match a dialog; only the
/// anchor text contributed by training dialogs links the two.
///
/// Each document gets `train_per_doc` training dialogs and one test dialog.
/// Dialog ids are `train-NNNN-T` and `test-NNNN`.
pub fn disjoint_vocabulary_corpus(docs: usize, train_per_doc: usize, seed: u64) -> SyntheticCorpus {
    const CONTENT_TERMS: usize = 8;
    const DIALOG_TERMS: usize = 6;
    const PER_DIALOG: usize = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shared = ["manual", "guide", "setting", "device", "account"];
    let mut documents = Vec::with_capacity(docs);
    let mut dialogs = Vec::with_capacity(docs * (train_per_doc + 1));
    let mut split = SplitAssignment {
        seed,
        train: vec![],
        dev: vec![],
        test: vec![],
    };
    for i in 0..docs {
        let mut words: Vec<String> = (0..CONTENT_TERMS)
            .flat_map(|j| std::iter::repeat_n(format!("c{i:03}k{j}"), 1 + j % 3))
            .collect();
        words.extend(shared.choose_multiple(&mut rng, 2).map(|s| s.to_string()));
        words.shuffle(&mut rng);
        documents.push(DocumentRecord {
            url: doc_url(i),
            content: words.join(" "),
        });
        let vocab: Vec<String> = (0..DIALOG_TERMS).map(|j| format!("u{i:03}q{j}")).collect();
        for t in 0..=train_per_doc {
            let picked: Vec<String> = vocab.choose_multiple(&mut rng, PER_DIALOG).cloned().collect();
            let id = if t < train_per_doc {
                format!("train-{i:04}-{t}")
            } else {
                format!("test-{i:04}")
            };
            if t < train_per_doc {
                split.train.push(id.clone());
            } else {
                split.test.push(id.clone());
            }
            dialogs.push(raw_dialog(id, &picked, &mut rng, i));
        }
    }
    SyntheticCorpus {
        documents,
        dialogs,
        split,
    }
}

fn zipf_word(rank: usize) -> String {
    const SYL: &[&str] = &["ka", "lo", "mi", "ne", "ru", "ta", "vo", "zi", "be", "do"];
    let mut s = String::from("w");
    let mut r = rank;
    loop {
        s.push_str(SYL[r % SYL.len()]);
        r /= SYL.len();
        if r == 0 {
            break;
        }
    }
    s
}

/// Documents of `doc_len` tokens drawn from a Zipf(1) law over `vocab` words,
/// with one training dialog per document (drawn from that document) and
/// `docs / 10` test dialogs.
pub fn zipf_corpus(docs: usize, vocab: usize, doc_len: usize, seed: u64) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<String> = (0..vocab).map(zipf_word).collect();
    let zipf = WeightedIndex::new((1..=vocab).map(|r| 1.0 / r as f64)).expect("positive weights");
    let mut documents = Vec::with_capacity(docs);
    let mut bodies = Vec::with_capacity(docs);
    for i in 0..docs {
        let body: Vec<String> = (0..doc_len).map(|_| words[zipf.sample(&mut rng)].clone()).collect();
        documents.push(DocumentRecord {
            url: doc_url(i),
            content: body.join(" "),
        });
        bodies.push(body);
    }
    let mut dialogs = Vec::new();
    let mut split = SplitAssignment {
        seed,
        train: vec![],
        dev: vec![],
        test: vec![],
    };
    let add = |id: String, gold: usize, rng: &mut ChaCha8Rng, dialogs: &mut Vec<DialogRecord>| {
        let picked: Vec<String> = bodies[gold].choose_multiple(rng, 12).cloned().collect();
        dialogs.push(raw_dialog(id, &picked, rng, gold));
    };
    for i in 0..docs {
        let id = format!("train-{i:04}");
        split.train.push(id.clone());
        add(id, i, &mut rng, &mut dialogs);
    }
    for t in 0..docs / 10 {
        let gold = rng.random_range(0..docs);
        let id = format!("test-{t:04}");
        split.test.push(id.clone());
        add(id, gold, &mut rng, &mut dialogs);
    }
    SyntheticCorpus {
        documents,
        dialogs,
        split,
    }
}
