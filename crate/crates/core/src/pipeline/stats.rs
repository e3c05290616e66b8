use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use super::AnnotatedThread;
use crate::corpus::{LabelSet, Standpoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSource {
    Gold,
    Predicted,
}

impl std::str::FromStr for LabelSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gold" => Ok(LabelSource::Gold),
            "predicted" => Ok(LabelSource::Predicted),
            _ => Err(Error::Config(format!("unknown label source {s:?}; expected gold or predicted"))),
        }
    }
}

/// Against/support ratio. Serializes as a number, `"inf"` when there is
/// against but no support, and `null` when both counts are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    Infinite,
    Undefined,
}

impl Ratio {
    pub fn new(against: usize, support: usize) -> Self {
        match (against, support) {
            (0, 0) => Ratio::Undefined,
            (_, 0) => Ratio::Infinite,
            (a, s) => Ratio::Finite(a as f64 / s as f64),
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ratio::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Finite(v) => s.serialize_f64(*v),
            Ratio::Infinite => s.serialize_str("inf"),
            Ratio::Undefined => s.serialize_none(),
        }
    }
}

/// Median and quartiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Exclusive quartiles: Q1 and Q3 are the medians of the lower and upper
/// halves, leaving out the middle value when the count is odd. A single
/// value is its own quartiles.
pub fn quartiles(values: &[f64]) -> Option<Spread> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = median_sorted(&v);
    let (q1, q3) = if n == 1 {
        (v[0], v[0])
    } else {
        (median_sorted(&v[..n / 2]), median_sorted(&v[n.div_ceil(2)..]))
    };
    Some(Spread {
        median,
        q1,
        q3,
        iqr: q3 - q1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgumentStats {
    pub argument_id: u32,
    pub quotes: usize,
    pub support: usize,
    pub against: usize,
    pub ratio: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreadStats {
    pub thread_id: u64,
    pub source: LabelSource,
    pub labeled_quotes: usize,
    pub argumentative_quotes: usize,
    pub argumentative_fraction: f64,
    pub argument_count: usize,
    pub quotes_per_argument: Option<Spread>,
    pub arguments: Vec<ArgumentStats>,
    /// #against / #support over every argumentative quote of the thread.
    pub overall_ratio: Ratio,
    /// Mean of the finite per-argument ratios.
    pub mean_argument_ratio: Option<f64>,
}

fn pick(q: &super::AnnotatedQuote, source: LabelSource) -> Option<&LabelSet> {
    match source {
        LabelSource::Gold => q.gold.as_ref(),
        LabelSource::Predicted => q.predicted.as_ref(),
    }
}

pub fn thread_stats(annotated: &AnnotatedThread, source: LabelSource) -> Result<ThreadStats> {
    let labeled: Vec<&LabelSet> = annotated.quotes.iter().filter_map(|q| pick(q, source)).collect();
    if labeled.is_empty() && source == LabelSource::Gold {
        return Err(Error::InvalidInput(format!(
            "thread {} has no gold labels",
            annotated.id
        )));
    }
    let mut groups: BTreeMap<u32, (usize, usize, usize)> = BTreeMap::new();
    let (mut support, mut against, mut argumentative) = (0, 0, 0);
    for l in labeled.iter().filter(|l| l.is_argumentative()) {
        argumentative += 1;
        let is_against = l.standpoint == Some(Standpoint::Against);
        if is_against {
            against += 1;
        } else {
            support += 1;
        }
        if let Some(id) = l.argument_id {
            let g = groups.entry(id).or_default();
            g.0 += 1;
            if is_against {
                g.2 += 1;
            } else {
                g.1 += 1;
            }
        }
    }
    let arguments: Vec<ArgumentStats> = groups
        .into_iter()
        .map(|(argument_id, (quotes, s, a))| ArgumentStats {
            argument_id,
            quotes,
            support: s,
            against: a,
            ratio: Ratio::new(a, s),
        })
        .collect();
    let sizes: Vec<f64> = arguments.iter().map(|a| a.quotes as f64).collect();
    let finite: Vec<f64> = arguments.iter().filter_map(|a| a.ratio.finite()).collect();
    Ok(ThreadStats {
        thread_id: annotated.id,
        source,
        labeled_quotes: labeled.len(),
        argumentative_quotes: argumentative,
        argumentative_fraction: if labeled.is_empty() {
            0.0
        } else {
            argumentative as f64 / labeled.len() as f64
        },
        argument_count: arguments.len(),
        quotes_per_argument: quartiles(&sizes),
        overall_ratio: Ratio::new(against, support),
        mean_argument_ratio: if finite.is_empty() {
            None
        } else {
            Some(finite.iter().sum::<f64>() / finite.len() as f64)
        },
        arguments,
    })
}

/// Summary over many threads.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub threads: usize,
    pub arguments_per_thread: Option<Spread>,
    pub mean_argument_ratio: Option<f64>,
}

pub fn corpus_stats(stats: &[ThreadStats]) -> CorpusStats {
    let per_thread: Vec<f64> = stats.iter().map(|s| s.argument_count as f64).collect();
    let ratios: Vec<f64> = stats
        .iter()
        .flat_map(|s| s.arguments.iter().filter_map(|a| a.ratio.finite()))
        .collect();
    CorpusStats {
        threads: stats.len(),
        arguments_per_thread: quartiles(&per_thread),
        mean_argument_ratio: if ratios.is_empty() {
            None
        } else {
            Some(ratios.iter().sum::<f64>() / ratios.len() as f64)
        },
    }
}
