//! Two-layer inference, thread statistics and the viewer export.
//!
//! Layer 1 labels every retained quote argumentative or not; the component
//! and standpoint models then run only on quotes layer 1 called
//! argumentative. Argument membership is never predicted: a predicted label
//! carries an argument ID only when it is copied from a gold annotation.

mod bundle;
mod stats;
mod view;

pub use bundle::{train_layer, ModelBundle, TrainedLayer};
pub use stats::{corpus_stats, quartiles, thread_stats, ArgumentStats, CorpusStats, LabelSource, Ratio, Spread, ThreadStats};
pub use view::{export_view_json, read_view_json, write_view_file};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{format_timestamp, Component, LabelSet, LabeledThread, Level1, Span, Standpoint};
use crate::error::{Error, Result};
use crate::features::thread_examples;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentMeta {
    pub index: usize,
    pub author: String,
    pub created_at: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedQuote {
    pub id: u32,
    pub comment_index: usize,
    pub span: Span,
    pub text: String,
    pub gold: Option<LabelSet>,
    pub predicted: Option<LabelSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgumentRef {
    pub argument_id: u32,
    pub quote_ids: Vec<u32>,
}

/// A thread with gold and/or predicted labels per quote. Its JSON form is
/// the viewer file format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedThread {
    pub id: u64,
    pub title: String,
    pub comments: Vec<CommentMeta>,
    pub quotes: Vec<AnnotatedQuote>,
    pub arguments: Vec<ArgumentRef>,
}

impl AnnotatedThread {
    /// Gold labels only; `predicted` is empty everywhere.
    pub fn from_gold(doc: &LabeledThread) -> Self {
        Self::assemble(doc, |_| None)
    }

    fn assemble(doc: &LabeledThread, mut predicted: impl FnMut(u32) -> Option<LabelSet>) -> Self {
        let comments = doc
            .thread
            .comments
            .iter()
            .map(|c| CommentMeta {
                index: c.index,
                author: c.author.clone(),
                created_at: format_timestamp(c.created_at),
            })
            .collect();
        let quotes = doc
            .quotes
            .iter()
            .map(|q| AnnotatedQuote {
                id: q.quote_id,
                comment_index: q.comment_index,
                span: q.span,
                text: q.text.clone(),
                gold: q.labels,
                predicted: predicted(q.quote_id),
            })
            .collect();
        let mut out = AnnotatedThread {
            id: doc.thread.id,
            title: doc.thread.title.clone(),
            comments,
            quotes,
            arguments: Vec::new(),
        };
        out.arguments = out.compute_arguments();
        out
    }

    /// Arguments grouped by ID, gold labels first and predicted copies
    /// otherwise; quote IDs ascending.
    pub fn compute_arguments(&self) -> Vec<ArgumentRef> {
        let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for q in &self.quotes {
            let id = q
                .gold
                .and_then(|l| l.argument_id)
                .or_else(|| q.predicted.and_then(|l| l.argument_id));
            if let Some(id) = id {
                groups.entry(id).or_default().push(q.id);
            }
        }
        groups
            .into_iter()
            .map(|(argument_id, mut quote_ids)| {
                quote_ids.sort_unstable();
                ArgumentRef { argument_id, quote_ids }
            })
            .collect()
    }

    /// Keeps the first `n` comments and their quotes.
    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.comments.retain(|c| c.index < n);
        out.quotes.retain(|q| q.comment_index < n);
        out.arguments = out.compute_arguments();
        out
    }
}

/// Runs the three classifiers over a thread.
pub fn run_two_layer_inference(doc: &LabeledThread, bundle: &ModelBundle) -> Result<AnnotatedThread> {
    bundle.check()?;
    let examples = thread_examples(doc);
    let mut predicted: BTreeMap<u32, LabelSet> = BTreeMap::new();
    for ex in &examples {
        let level1: Level1 = parse_label(bundle.level1.predict_label(ex)?)?;
        let labels = match level1 {
            Level1::NonArgumentative => LabelSet::non_argumentative(),
            Level1::Argumentative => {
                let component: Component = parse_label(bundle.component.predict_label(ex)?)?;
                let standpoint: Standpoint = parse_label(bundle.standpoint.predict_label(ex)?)?;
                let argument_id = ex
                    .labels
                    .filter(LabelSet::is_argumentative)
                    .and_then(|g| g.argument_id);
                LabelSet::argumentative(component, standpoint, argument_id)
            }
        };
        predicted.insert(ex.key.quote_id, labels);
    }
    Ok(AnnotatedThread::assemble(doc, |id| predicted.get(&id).copied()))
}

fn parse_label<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Config(format!("model predicted unknown label {s:?}")))
}
