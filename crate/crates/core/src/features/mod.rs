//! Feature families and their concatenation.
//!
//! Column blocks always appear in the order TFIDF | LEXICON | POLITENESS |
//! POS | CONV, whatever order the sets were requested in. Every model that
//! looks at data (TF-IDF vocabulary and idf, POS n-gram vocabulary) is fitted
//! through [`fit_features`] on training examples only; the fitted bundle
//! records which quotes it saw.

mod conversational;
mod lexicon;
mod ngram;
mod politeness;
mod pos;
mod sparse;

pub use conversational::{conversational_features, ConvScaler, ConversationalFeatures, CONV_DIM, CONV_LOG_SLOTS, CONV_SLOT_NAMES};
pub use lexicon::CategoryLexicon;
pub use ngram::{ngrams, NgramRange, PosNgramModel, TfidfModel, NGRAM_SEPARATOR};
pub use politeness::{logistic, politeness_score, PolitenessMarkers, POLITENESS_MARKERS};
pub use pos::{pos_tag, PosTag, PosTagger, POS_LEXICON};
pub use sparse::SparseVector;

pub(crate) use ngram::hex as hex_digest;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{LabelSet, LabeledThread};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::preprocess::{filter_quotes, TokenizedQuote};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    Tfidf,
    Lexicon,
    Politeness,
    Pos,
    Conv,
}

impl FeatureSet {
    pub const ALL: [FeatureSet; 5] = [
        FeatureSet::Tfidf,
        FeatureSet::Lexicon,
        FeatureSet::Politeness,
        FeatureSet::Pos,
        FeatureSet::Conv,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureSet::Tfidf => "tfidf",
            FeatureSet::Lexicon => "lexicon",
            FeatureSet::Politeness => "politeness",
            FeatureSet::Pos => "pos",
            FeatureSet::Conv => "conv",
        }
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        FeatureSet::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown feature set {s:?}")))
    }
}

/// Parses a comma-separated selection such as `tfidf,pos` or `all`.
///
/// `all` expands to every set; it drops LEXICON with a logged notice when no
/// lexicon is configured. Naming `lexicon` explicitly without one is an
/// error. The result is in canonical block order.
pub fn parse_feature_sets(spec: &str, lexicon_configured: bool) -> Result<Vec<FeatureSet>> {
    let mut sets = BTreeSet::new();
    let mut explicit_lexicon = false;
    let mut saw_all = false;
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part.eq_ignore_ascii_case("all") {
            saw_all = true;
            sets.extend(FeatureSet::ALL);
        } else {
            let f: FeatureSet = part.parse()?;
            explicit_lexicon |= f == FeatureSet::Lexicon;
            sets.insert(f);
        }
    }
    if sets.is_empty() {
        return Err(Error::Config("no feature sets selected".into()));
    }
    if !lexicon_configured && sets.contains(&FeatureSet::Lexicon) {
        if explicit_lexicon {
            return Err(Error::Config(
                "feature set 'lexicon' needs a category lexicon file (--lexicon)".into(),
            ));
        }
        if saw_all {
            log::info!("no category lexicon configured; 'all' excludes the lexicon set");
        }
        sets.remove(&FeatureSet::Lexicon);
    }
    Ok(sets.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub sets: Vec<FeatureSet>,
    pub tfidf_range: NgramRange,
    pub pos_range: NgramRange,
    /// Feed raw n-gram counts instead of TF-IDF values in the TFIDF block.
    pub raw_counts: bool,
    pub lexicon: Option<CategoryLexicon>,
}

impl FeatureConfig {
    pub fn new(sets: Vec<FeatureSet>) -> Self {
        FeatureConfig {
            sets,
            tfidf_range: NgramRange::default(),
            pos_range: NgramRange::default(),
            raw_counts: false,
            lexicon: None,
        }
    }

    pub fn with_lexicon(mut self, lexicon: CategoryLexicon) -> Self {
        self.lexicon = Some(lexicon);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.sets.is_empty() {
            return Err(Error::Config("no feature sets selected".into()));
        }
        if self.sets.contains(&FeatureSet::Lexicon) && self.lexicon.is_none() {
            return Err(Error::Config("feature set 'lexicon' selected without a lexicon".into()));
        }
        Ok(())
    }
}

/// Identifies a quote across a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuoteKey {
    pub thread_id: u64,
    pub quote_id: u32,
}

impl fmt::Display for QuoteKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:q{}", self.thread_id, self.quote_id)
    }
}

/// A retained quote with every per-quote representation precomputed.
/// Nothing here depends on other quotes' texts except the conversational
/// slots, which only use the quote's own thread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example {
    pub key: QuoteKey,
    pub comment_index: usize,
    pub text: String,
    pub surface: Vec<String>,
    pub lexical: Vec<String>,
    pub tags: Vec<PosTag>,
    pub politeness: f64,
    pub conv: ConversationalFeatures,
    pub labels: Option<LabelSet>,
}

/// Filters, tokenizes and annotates the quotes of one thread.
pub fn thread_examples(doc: &LabeledThread) -> Vec<Example> {
    let kept = filter_quotes(doc.quotes.clone()).kept;
    let tokenized: Vec<TokenizedQuote> = kept
        .iter()
        .map(|q| TokenizedQuote::from_text(q.quote_id, &q.text))
        .collect();
    let counts: Vec<usize> = tokenized.iter().map(|t| t.surface_tokens.len()).collect();
    let conv = conversational_features(&doc.thread, &kept, &counts);
    kept.into_iter()
        .zip(tokenized)
        .zip(conv)
        .map(|((q, t), conv)| Example {
            key: QuoteKey {
                thread_id: doc.thread.id,
                quote_id: q.quote_id,
            },
            comment_index: q.comment_index,
            tags: pos_tag(&t.surface_tokens),
            politeness: politeness_score(&t.surface_tokens),
            text: q.text,
            surface: t.surface_tokens,
            lexical: t.lexical_tokens,
            conv,
            labels: q.labels,
        })
        .collect()
}

/// Examples for a whole corpus, threads processed independently.
pub fn build_examples(corpus: &[LabeledThread], exec: Execution) -> Vec<Example> {
    exec.map(corpus, thread_examples).into_iter().flatten().collect()
}

/// Models fitted on one training set, plus the keys of that set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedFeatures {
    pub config: FeatureConfig,
    pub tfidf: Option<TfidfModel>,
    pub pos: Option<PosNgramModel>,
    pub conv_scale: Option<ConvScaler>,
    /// Sorted keys of the training examples the models were fitted on.
    pub fitted_on: Vec<QuoteKey>,
}

pub fn fit_features(config: &FeatureConfig, train: &[&Example]) -> Result<FittedFeatures> {
    config.validate()?;
    if train.is_empty() {
        return Err(Error::Fit("cannot fit features on an empty training set".into()));
    }
    let tfidf = if config.sets.contains(&FeatureSet::Tfidf) {
        let docs: Vec<&[String]> = train.iter().map(|e| e.lexical.as_slice()).collect();
        Some(TfidfModel::fit(&docs, config.tfidf_range)?)
    } else {
        None
    };
    let pos = if config.sets.contains(&FeatureSet::Pos) {
        let docs: Vec<&[PosTag]> = train.iter().map(|e| e.tags.as_slice()).collect();
        Some(PosNgramModel::fit(&docs, config.pos_range)?)
    } else {
        None
    };
    let conv_scale = config
        .sets
        .contains(&FeatureSet::Conv)
        .then(|| ConvScaler::fit(train.iter().map(|e| &e.conv)));
    let mut fitted_on: Vec<QuoteKey> = train.iter().map(|e| e.key).collect();
    fitted_on.sort_unstable();
    fitted_on.dedup();
    Ok(FittedFeatures {
        config: config.clone(),
        tfidf,
        pos,
        conv_scale,
        fitted_on,
    })
}

impl FittedFeatures {
    fn sets(&self) -> impl Iterator<Item = FeatureSet> + '_ {
        FeatureSet::ALL.into_iter().filter(|s| self.config.sets.contains(s))
    }

    pub fn block_dim(&self, set: FeatureSet) -> usize {
        match set {
            FeatureSet::Tfidf => self.tfidf.as_ref().map_or(0, TfidfModel::dim),
            FeatureSet::Lexicon => self.config.lexicon.as_ref().map_or(0, CategoryLexicon::dim),
            FeatureSet::Politeness => 1,
            FeatureSet::Pos => self.pos.as_ref().map_or(0, PosNgramModel::dim),
            FeatureSet::Conv => CONV_DIM,
        }
    }

    /// Column range of each selected block.
    pub fn blocks(&self) -> Vec<(FeatureSet, Range<usize>)> {
        let mut offset = 0;
        self.sets()
            .map(|s| {
                let d = self.block_dim(s);
                let r = offset..offset + d;
                offset += d;
                (s, r)
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.sets().map(|s| self.block_dim(s)).sum()
    }

    pub fn transform(&self, ex: &Example) -> SparseVector {
        let parts: Vec<SparseVector> = self
            .sets()
            .map(|s| match s {
                FeatureSet::Tfidf => {
                    let m = self.tfidf.as_ref().expect("tfidf fitted when selected");
                    if self.config.raw_counts {
                        m.transform_counts(&ex.lexical)
                    } else {
                        m.transform(&ex.lexical)
                    }
                }
                FeatureSet::Lexicon => self
                    .config
                    .lexicon
                    .as_ref()
                    .expect("lexicon present when selected")
                    .transform(&ex.lexical),
                FeatureSet::Politeness => SparseVector::from_dense(&[ex.politeness]),
                FeatureSet::Pos => self.pos.as_ref().expect("pos fitted when selected").transform(&ex.tags),
                FeatureSet::Conv => {
                    let scaler = self.conv_scale.as_ref().expect("conv scaler fitted when selected");
                    SparseVector::from_dense(&scaler.transform(&ex.conv))
                }
            })
            .collect();
        let refs: Vec<&SparseVector> = parts.iter().collect();
        SparseVector::concat(&refs)
    }

    /// SHA-256 over the configuration and every fitted model. Two bundles
    /// with equal fingerprints transform every example identically.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for s in self.sets() {
            h.update(s.as_str().as_bytes());
            h.update([0u8]);
        }
        h.update([u8::from(self.config.raw_counts)]);
        if let Some(m) = &self.tfidf {
            h.update(m.fingerprint().as_bytes());
        }
        if let Some(m) = &self.pos {
            h.update(m.fingerprint().as_bytes());
        }
        if let Some(l) = &self.config.lexicon {
            h.update(l.fingerprint().as_bytes());
        }
        if let Some(c) = &self.conv_scale {
            c.hash_into(&mut h);
        }
        ngram::hex(&h.finalize())
    }
}

/// Rows plus the column-offset map of their blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub rows: Vec<SparseVector>,
    pub dim: usize,
    pub blocks: Vec<(FeatureSet, Range<usize>)>,
}

impl FeatureMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub fn assemble_features(fitted: &FittedFeatures, examples: &[&Example], exec: Execution) -> Result<FeatureMatrix> {
    let dim = fitted.dim();
    let rows = exec.map(examples, |e| fitted.transform(e));
    if let Some(bad) = rows.iter().find(|r| r.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.dim(),
        });
    }
    Ok(FeatureMatrix {
        rows,
        dim,
        blocks: fitted.blocks(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AuthorRole, IssueThread};

    fn fixture() -> Vec<Example> {
        let thread = IssueThread::from_parts(
            7,
            "Tabs",
            vec![
                ("ann".into(), AuthorRole::Owner, 0, "Please use tabs. They are better.".into()),
                ("bob".into(), AuthorRole::Other, 60, "+1\n\nI think spaces work fine.".into()),
                ("ann".into(), AuthorRole::Member, 90, "See `fmt` in #12. Thanks!".into()),
            ],
        );
        thread_examples(&LabeledThread::unlabeled(thread))
    }

    #[test]
    fn selection_parsing() {
        use FeatureSet::*;
        assert_eq!(parse_feature_sets("conv,tfidf", false).unwrap(), vec![Tfidf, Conv]);
        assert_eq!(parse_feature_sets("all", false).unwrap(), vec![Tfidf, Politeness, Pos, Conv]);
        assert_eq!(parse_feature_sets("all", true).unwrap(), FeatureSet::ALL.to_vec());
        assert!(parse_feature_sets("lexicon", false).is_err());
        assert!(parse_feature_sets("bogus", false).is_err());
        assert!(parse_feature_sets("", false).is_err());
    }

    #[test]
    fn filtered_quotes_are_absent() {
        let ex = fixture();
        assert!(ex.iter().all(|e| e.text != "+1"));
        assert_eq!(ex.len(), 5);
    }

    #[test]
    fn column_counts_for_every_subset() {
        let ex = fixture();
        let refs: Vec<&Example> = ex.iter().collect();
        let lex = CategoryLexicon::parse("i\tself\nthank*\tpositive\n").unwrap();
        for mask in 1u32..32 {
            let sets: Vec<FeatureSet> = FeatureSet::ALL
                .into_iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, s)| s)
                .collect();
            let cfg = FeatureConfig::new(sets.clone()).with_lexicon(lex.clone());
            let fitted = fit_features(&cfg, &refs).unwrap();
            let m = assemble_features(&fitted, &refs, Execution::Sequential).unwrap();
            let expected: usize = sets.iter().map(|s| fitted.block_dim(*s)).sum();
            assert_eq!(m.dim, expected);
            assert_eq!(m.blocks.last().unwrap().1.end, expected);
            assert!(m.rows.iter().all(|r| r.dim() == expected));
        }
    }

    #[test]
    fn politeness_only_is_one_column() {
        let ex = fixture();
        let refs: Vec<&Example> = ex.iter().collect();
        let fitted = fit_features(&FeatureConfig::new(vec![FeatureSet::Politeness]), &refs).unwrap();
        assert_eq!(fitted.dim(), 1);
    }

    #[test]
    fn tfidf_plus_conv_adds_thirteen() {
        let ex = fixture();
        let refs: Vec<&Example> = ex.iter().collect();
        let cfg = FeatureConfig::new(vec![FeatureSet::Tfidf, FeatureSet::Conv]);
        let fitted = fit_features(&cfg, &refs).unwrap();
        let vocab = fitted.tfidf.as_ref().unwrap().dim();
        assert_eq!(fitted.dim(), vocab + 13);
    }

    #[test]
    fn fingerprint_ignores_unseen_examples() {
        let ex = fixture();
        let train: Vec<&Example> = ex[..2].iter().collect();
        let cfg = FeatureConfig::new(vec![FeatureSet::Tfidf, FeatureSet::Pos]);
        let a = fit_features(&cfg, &train).unwrap();
        let mut mutated = ex.clone();
        mutated[3].lexical = vec!["entirely".into(), "different".into()];
        let train2: Vec<&Example> = mutated[..2].iter().collect();
        let b = fit_features(&cfg, &train2).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fitted_on.len(), 2);
    }
}
