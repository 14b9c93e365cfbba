use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::load::Corpus;
use super::types::{Dialog, Document};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
}

impl SplitSizes {
    pub fn total(&self) -> usize {
        self.train + self.dev + self.test
    }
}

/// Disjoint train/dev/test dialogs over one shared document pool.
#[derive(Debug, Clone)]
pub struct CorpusSplit {
    pub train: Vec<Dialog>,
    pub dev: Vec<Dialog>,
    pub test: Vec<Dialog>,
    pub pool: Vec<Document>,
}

/// The on-disk form of a split: dialog ids only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub seed: u64,
    pub train: Vec<String>,
    pub dev: Vec<String>,
    pub test: Vec<String>,
}

impl CorpusSplit {
    pub fn assignment(&self, seed: u64) -> SplitAssignment {
        let ids = |v: &[Dialog]| v.iter().map(|d| d.dialog_id.clone()).collect();
        SplitAssignment {
            seed,
            train: ids(&self.train),
            dev: ids(&self.dev),
            test: ids(&self.test),
        }
    }

    /// Rebuilds a split from a saved assignment.
    pub fn from_assignment(corpus: &Corpus, assignment: &SplitAssignment) -> Result<Self> {
        let by_id: HashMap<&str, &Dialog> = corpus
            .dialogs
            .iter()
            .map(|d| (d.dialog_id.as_str(), d))
            .collect();
        let pick = |ids: &[String]| -> Result<Vec<Dialog>> {
            ids.iter()
                .map(|id| {
                    by_id
                        .get(id.as_str())
                        .map(|d| (*d).clone())
                        .ok_or_else(|| Error::UnknownDialog(id.clone()))
                })
                .collect()
        };
        let split = CorpusSplit {
            train: pick(&assignment.train)?,
            dev: pick(&assignment.dev)?,
            test: pick(&assignment.test)?,
            pool: corpus.documents.clone(),
        };
        split.validate()?;
        Ok(split)
    }

    pub fn subset(&self, name: &str) -> Option<&[Dialog]> {
        match name {
            "train" => Some(&self.train),
            "dev" => Some(&self.dev),
            "test" => Some(&self.test),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let pool: HashSet<&str> = self.pool.iter().map(|d| d.doc_id.as_str()).collect();
        let mut seen = HashSet::new();
        for d in self.train.iter().chain(&self.dev).chain(&self.test) {
            if !seen.insert(d.dialog_id.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "dialog `{}` assigned to more than one split",
                    d.dialog_id
                )));
            }
            if !pool.contains(d.gold_url.as_str()) {
                return Err(Error::UnknownDocument(d.gold_url.clone()));
            }
        }
        Ok(())
    }
}

/// Shuffles dialogs (ordered by id first, so input order does not matter)
/// with a seeded RNG and carves off the requested split sizes.
pub fn split_corpus(corpus: &Corpus, sizes: SplitSizes, seed: u64) -> Result<CorpusSplit> {
    if sizes.total() > corpus.dialogs.len() {
        return Err(Error::InvalidArgument(format!(
            "split sizes total {} but the corpus has {} dialogs",
            sizes.total(),
            corpus.dialogs.len()
        )));
    }
    let mut dialogs: Vec<&Dialog> = corpus.dialogs.iter().collect();
    dialogs.sort_by(|a, b| a.dialog_id.cmp(&b.dialog_id));
    dialogs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut it = dialogs.into_iter().cloned();
    let split = CorpusSplit {
        train: it.by_ref().take(sizes.train).collect(),
        dev: it.by_ref().take(sizes.dev).collect(),
        test: it.by_ref().take(sizes.test).collect(),
        pool: corpus.documents.clone(),
    };
    split.validate()?;
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Speaker;

    fn corpus(n: usize) -> Corpus {
        Corpus {
            dialogs: (0..n)
                .map(|i| Dialog::new(format!("d{i:04}"), [(Speaker::User, "hello")], "u"))
                .collect(),
            documents: vec![Document::new("u", "text").unwrap()],
            errors: vec![],
        }
    }

    fn sizes(train: usize, dev: usize, test: usize) -> SplitSizes {
        SplitSizes { train, dev, test }
    }

    #[test]
    fn deterministic_under_seed() {
        let c = corpus(10);
        let a = split_corpus(&c, sizes(6, 2, 2), 7).unwrap().assignment(7);
        let b = split_corpus(&c, sizes(6, 2, 2), 7).unwrap().assignment(7);
        assert_eq!(a, b);
        assert_eq!((a.train.len(), a.dev.len(), a.test.len()), (6, 2, 2));
        let all: HashSet<_> = a.train.iter().chain(&a.dev).chain(&a.test).collect();
        assert_eq!(all.len(), 10);
    }

    #[test]
    fn oversized_is_error() {
        assert!(split_corpus(&corpus(10), sizes(11, 0, 0), 7).is_err());
    }

    #[test]
    fn seeds_differ_on_large_fixture() {
        let c = corpus(1000);
        let a = split_corpus(&c, sizes(800, 100, 100), 1).unwrap().assignment(1);
        let b = split_corpus(&c, sizes(800, 100, 100), 2).unwrap().assignment(2);
        assert_ne!(a.test, b.test);
    }

    #[test]
    fn assignment_round_trip() {
        let c = corpus(10);
        let s = split_corpus(&c, sizes(5, 3, 2), 3).unwrap();
        let back = CorpusSplit::from_assignment(&c, &s.assignment(3)).unwrap();
        assert_eq!(back.test, s.test);
        let mut bad = s.assignment(3);
        bad.dev.push(bad.train[0].clone());
        assert!(CorpusSplit::from_assignment(&c, &bad).is_err());
    }
}
