//! Seeded synthetic corpora for tests and benchmarks.
//!
//! Argumentative and non-argumentative quotes draw their words from two
//! disjoint made-up vocabularies, so the level-1 task is separable by
//! construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{AuthorRole, Component, IssueThread, LabelSet, LabeledThread, Standpoint};

const QUOTES_PER_COMMENT: usize = 4;
const COMMENTS_PER_THREAD: usize = 5;
const WORDS_PER_QUOTE: usize = 6;

fn vocabulary(prefix: &str) -> Vec<String> {
    let mut out = Vec::new();
    for v in ['a', 'e', 'i', 'o', 'u'] {
        for c in ['b', 'd', 'k', 'm', 'p', 't'] {
            out.push(format!("{prefix}{v}{c}"));
        }
    }
    out
}

fn sentence(rng: &mut ChaCha8Rng, vocab: &[String]) -> String {
    let words: Vec<&str> = (0..WORDS_PER_QUOTE)
        .map(|_| vocab[rng.random_range(0..vocab.len())].as_str())
        .collect();
    let mut s = words.join(" ");
    s[..1].make_ascii_uppercase();
    s.push('.');
    s
}

/// About `n_quotes` quotes (rounded up to whole threads of 20), exactly
/// balanced between argumentative and non-argumentative.
pub fn synthetic_corpus(n_quotes: usize, seed: u64) -> Vec<LabeledThread> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_thread = QUOTES_PER_COMMENT * COMMENTS_PER_THREAD;
    let n_threads = n_quotes.div_ceil(per_thread).max(1);
    let total = n_threads * per_thread;
    let mut arg_flags: Vec<bool> = (0..total).map(|i| i % 2 == 0).collect();
    arg_flags.shuffle(&mut rng);
    let arg_vocab = vocabulary("kab");
    let non_vocab = vocabulary("lom");
    let roles = [AuthorRole::Owner, AuthorRole::Collaborator, AuthorRole::Member, AuthorRole::Other];

    let mut flags = arg_flags.into_iter();
    let mut corpus = Vec::with_capacity(n_threads);
    for t in 0..n_threads {
        let mut parts = Vec::new();
        let mut labels = Vec::new();
        let mut time = 1_500_000_000 + rng.random_range(0..1_000_000);
        for _ in 0..COMMENTS_PER_THREAD {
            let mut sentences = Vec::new();
            for _ in 0..QUOTES_PER_COMMENT {
                let arg = flags.next().expect("enough flags");
                sentences.push(sentence(&mut rng, if arg { &arg_vocab } else { &non_vocab }));
                labels.push(if arg {
                    LabelSet::argumentative(
                        Component::ALL[rng.random_range(0..Component::ALL.len())],
                        Standpoint::ALL[rng.random_range(0..Standpoint::ALL.len())],
                        Some(rng.random_range(1..4)),
                    )
                } else {
                    LabelSet::non_argumentative()
                });
            }
            let author = format!("user{}", rng.random_range(0..4));
            parts.push((author, roles[rng.random_range(0..roles.len())], time, sentences.join(" ")));
            time += rng.random_range(1..7200);
        }
        let thread = IssueThread::from_parts(1000 + t as u64, format!("Synthetic issue {t}"), parts);
        let mut doc = LabeledThread::unlabeled(thread);
        assert_eq!(doc.quotes.len(), labels.len(), "synthetic sentences segment one-to-one");
        for (q, l) in doc.quotes.iter_mut().zip(labels) {
            q.labels = Some(l);
        }
        corpus.push(doc);
    }
    corpus
}

/// The same corpus with label sets shuffled across all quotes.
pub fn permute_labels(corpus: &[LabeledThread], seed: u64) -> Vec<LabeledThread> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<Option<LabelSet>> = corpus.iter().flat_map(|d| d.quotes.iter().map(|q| q.labels)).collect();
    labels.shuffle(&mut rng);
    let mut it = labels.into_iter();
    corpus
        .iter()
        .map(|d| {
            let mut d = d.clone();
            for q in &mut d.quotes {
                q.labels = it.next().expect("one label per quote");
            }
            d
        })
        .collect()
}
