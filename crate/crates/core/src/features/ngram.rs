//! N-gram vocabularies: TF-IDF over lexical tokens and count vectors over
//! POS tag sequences.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::sparse::SparseVector;
use crate::error::{Error, Result};

/// Joins the tokens of an n-gram.
pub const NGRAM_SEPARATOR: char = '\u{241F}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramRange {
    pub lo: usize,
    pub hi: usize,
}

impl NgramRange {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::Config(format!("invalid n-gram range ({lo},{hi}); need 1 <= lo <= hi")));
        }
        Ok(NgramRange { lo, hi })
    }
}

impl Default for NgramRange {
    fn default() -> Self {
        NgramRange { lo: 1, hi: 3 }
    }
}

impl std::str::FromStr for NgramRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Config(format!("n-gram range {s:?} must look like a,b")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("invalid n-gram bound {x:?}")))
        };
        NgramRange::new(parse(a)?, parse(b)?)
    }
}

/// All n-grams of `tokens` for n in the range, in order of n then position.
pub fn ngrams<S: AsRef<str>>(tokens: &[S], range: NgramRange) -> Vec<String> {
    let mut out = Vec::new();
    for n in range.lo..=range.hi {
        if n > tokens.len() {
            break;
        }
        for window in tokens.windows(n) {
            let mut gram = String::new();
            for (i, t) in window.iter().enumerate() {
                if i > 0 {
                    gram.push(NGRAM_SEPARATOR);
                }
                gram.push_str(t.as_ref());
            }
            out.push(gram);
        }
    }
    out
}

fn build_vocabulary<'a>(grams: impl Iterator<Item = &'a String>) -> BTreeMap<String, usize> {
    let set: BTreeSet<&String> = grams.collect();
    set.into_iter().enumerate().map(|(i, g)| (g.clone(), i)).collect()
}

fn count_vector(vocab: &BTreeMap<String, usize>, grams: &[String]) -> SparseVector {
    let pairs = grams
        .iter()
        .filter_map(|g| vocab.get(g).map(|&i| (i, 1.0)))
        .collect();
    SparseVector::from_pairs(vocab.len(), pairs)
}

fn hash_vocab(h: &mut Sha256, range: NgramRange, vocab: &BTreeMap<String, usize>) {
    h.update((range.lo as u64).to_le_bytes());
    h.update((range.hi as u64).to_le_bytes());
    for (g, i) in vocab {
        h.update(g.as_bytes());
        h.update([0u8]);
        h.update((*i as u64).to_le_bytes());
    }
}

/// Smooth-idf TF-IDF: `idf(t) = ln((1 + N) / (1 + df(t))) + 1`; transforms
/// are raw counts times idf, L2-normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    pub ngram_range: NgramRange,
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<f64>,
    pub document_count: usize,
}

impl TfidfModel {
    pub fn fit<D: AsRef<[S]>, S: AsRef<str>>(docs: &[D], ngram_range: NgramRange) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::Fit("cannot fit TF-IDF on an empty corpus".into()));
        }
        let per_doc: Vec<Vec<String>> = docs.iter().map(|d| ngrams(d.as_ref(), ngram_range)).collect();
        let vocabulary = build_vocabulary(per_doc.iter().flatten());
        let mut df = vec![0usize; vocabulary.len()];
        for grams in &per_doc {
            let unique: HashSet<usize> = grams.iter().map(|g| vocabulary[g]).collect();
            for i in unique {
                df[i] += 1;
            }
        }
        let n = docs.len() as f64;
        let idf = df
            .iter()
            .map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0)
            .collect();
        Ok(TfidfModel {
            ngram_range,
            vocabulary,
            idf,
            document_count: docs.len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.vocabulary.len()
    }

    /// Raw in-vocabulary n-gram counts (no idf, no normalization).
    pub fn transform_counts<S: AsRef<str>>(&self, tokens: &[S]) -> SparseVector {
        count_vector(&self.vocabulary, &ngrams(tokens, self.ngram_range))
    }

    pub fn transform<S: AsRef<str>>(&self, tokens: &[S]) -> SparseVector {
        let counts = self.transform_counts(tokens);
        let weighted = counts
            .entries()
            .iter()
            .map(|&(i, c)| (i, c * self.idf[i]))
            .collect();
        SparseVector::from_pairs(self.dim(), weighted).l2_normalized()
    }

    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"tfidf");
        hash_vocab(&mut h, self.ngram_range, &self.vocabulary);
        for v in &self.idf {
            h.update(v.to_bits().to_le_bytes());
        }
        h.update((self.document_count as u64).to_le_bytes());
        hex(&h.finalize())
    }
}

/// Tag n-gram counts, L2-normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosNgramModel {
    pub ngram_range: NgramRange,
    pub vocabulary: BTreeMap<String, usize>,
}

impl PosNgramModel {
    pub fn fit<D: AsRef<[S]>, S: AsRef<str>>(tag_lists: &[D], ngram_range: NgramRange) -> Result<Self> {
        if tag_lists.is_empty() {
            return Err(Error::Fit("cannot fit POS n-grams on an empty corpus".into()));
        }
        let per_doc: Vec<Vec<String>> = tag_lists.iter().map(|d| ngrams(d.as_ref(), ngram_range)).collect();
        Ok(PosNgramModel {
            ngram_range,
            vocabulary: build_vocabulary(per_doc.iter().flatten()),
        })
    }

    pub fn dim(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn transform<S: AsRef<str>>(&self, tags: &[S]) -> SparseVector {
        count_vector(&self.vocabulary, &ngrams(tags, self.ngram_range)).l2_normalized()
    }

    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"pos");
        hash_vocab(&mut h, self.ngram_range, &self.vocabulary);
        hex(&h.finalize())
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
