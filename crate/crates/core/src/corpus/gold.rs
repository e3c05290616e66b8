//! Gold-label import.
//!
//! CSV header: `quote_id,level1,component,standpoint,argument_id,span_start,span_end`.
//! Absent optionals are empty strings. A row with empty span columns labels
//! the referenced quote as a whole. Rows carrying `span_start`/`span_end`
//! are manual sub-segments: offsets are characters relative to the parent
//! quote's text, the parent is removed and replaced by one child quote per
//! row. Child quotes get fresh ids after the largest existing id, in row
//! order.

use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::{Component, LabelSet, Level1, Quote, Span, Standpoint};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct LabelRow {
    quote_id: String,
    level1: String,
    #[serde(default)]
    component: String,
    #[serde(default)]
    standpoint: String,
    #[serde(default)]
    argument_id: String,
    #[serde(default)]
    span_start: String,
    #[serde(default)]
    span_end: String,
}

fn opt<'a>(s: &'a str) -> Option<&'a str> {
    let t = s.trim();
    (!t.is_empty() && t != "-").then_some(t)
}

fn parse_quote_id(raw: &str, row: usize) -> Result<u32> {
    let t = raw.trim();
    let digits = t.strip_prefix('q').or_else(|| t.strip_prefix('Q')).unwrap_or(t);
    digits.parse().map_err(|_| Error::Validation {
        row,
        message: format!("invalid quote_id {raw:?}"),
    })
}

fn parse_row(r: &LabelRow, row: usize) -> Result<(u32, LabelSet, Option<Span>)> {
    let invalid = |message: String| Error::Validation { row, message };
    let quote_id = parse_quote_id(&r.quote_id, row)?;
    let level1: Level1 = r.level1.parse().map_err(invalid)?;
    let component = opt(&r.component)
        .map(str::parse::<Component>)
        .transpose()
        .map_err(invalid)?;
    let standpoint = opt(&r.standpoint)
        .map(str::parse::<Standpoint>)
        .transpose()
        .map_err(invalid)?;
    let argument_id = opt(&r.argument_id)
        .map(|s| {
            s.trim_start_matches("arg")
                .trim()
                .parse::<u32>()
                .map_err(|_| invalid(format!("invalid argument_id {s:?}")))
        })
        .transpose()?;
    let labels = LabelSet::new(level1, component, standpoint, argument_id).map_err(invalid)?;
    let span = match (opt(&r.span_start), opt(&r.span_end)) {
        (None, None) => None,
        (Some(s), Some(e)) => {
            let s: usize = s.parse().map_err(|_| invalid(format!("invalid span_start {s:?}")))?;
            let e: usize = e.parse().map_err(|_| invalid(format!("invalid span_end {e:?}")))?;
            if s >= e {
                return Err(invalid(format!("empty or reversed span [{s},{e})")));
            }
            Some(Span::new(s, e))
        }
        _ => return Err(invalid("span_start and span_end must both be set or both empty".into())),
    };
    Ok((quote_id, labels, span))
}

/// One parsed label row. `row` is 1-based, header excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelRecord {
    pub row: usize,
    pub quote_id: u32,
    pub labels: LabelSet,
    /// Sub-segment offsets relative to the parent quote, when given.
    pub span: Option<Span>,
}

/// Parses and validates every row of a label CSV.
pub fn read_label_rows<R: Read>(rows: R) -> Result<Vec<LabelRecord>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(rows);
    let mut out = Vec::new();
    for (i, rec) in reader.deserialize::<LabelRow>().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::Validation {
            row,
            message: e.to_string(),
        })?;
        let (quote_id, labels, span) = parse_row(&rec, row)?;
        out.push(LabelRecord {
            row,
            quote_id,
            labels,
            span,
        });
    }
    Ok(out)
}

/// Attaches gold labels to already-segmented quotes.
///
/// Returns the full quote list (labeled and unlabeled), sorted by comment
/// index and span start.
pub fn import_gold_labels<R: Read>(rows: R, quotes: &[Quote]) -> Result<Vec<Quote>> {
    let mut whole: HashMap<u32, (usize, LabelSet)> = HashMap::new();
    let mut parts: BTreeMap<u32, Vec<(usize, LabelSet, Span)>> = BTreeMap::new();
    let by_id: HashMap<u32, &Quote> = quotes.iter().map(|q| (q.quote_id, q)).collect();

    for LabelRecord {
        row,
        quote_id: id,
        labels,
        span,
    } in read_label_rows(rows)?
    {
        if !by_id.contains_key(&id) {
            return Err(Error::Reference {
                row,
                message: format!("quote_id {id} does not exist in the thread"),
            });
        }
        match span {
            None => {
                if whole.insert(id, (row, labels)).is_some() {
                    return Err(Error::Validation {
                        row,
                        message: format!("quote {id} labeled twice"),
                    });
                }
            }
            Some(span) => parts.entry(id).or_default().push((row, labels, span)),
        }
    }

    let mut next_id = quotes.iter().map(|q| q.quote_id + 1).max().unwrap_or(0);
    let mut out = Vec::with_capacity(quotes.len() + parts.len());
    for q in quotes {
        if let Some(children) = parts.get_mut(&q.quote_id) {
            if let Some((row, _)) = whole.get(&q.quote_id) {
                return Err(Error::Validation {
                    row: *row,
                    message: format!("quote {} has both a whole-quote row and sub-segment rows", q.quote_id),
                });
            }
            children.sort_by_key(|(_, _, s)| s.start);
            let parent_chars: Vec<char> = q.text.chars().collect();
            let mut last_end = 0;
            for (row, labels, span) in children.iter() {
                if span.end > parent_chars.len() {
                    return Err(Error::Reference {
                        row: *row,
                        message: format!(
                            "sub-span [{},{}) exceeds quote {} of length {}",
                            span.start,
                            span.end,
                            q.quote_id,
                            parent_chars.len()
                        ),
                    });
                }
                if span.start < last_end {
                    return Err(Error::Validation {
                        row: *row,
                        message: format!("sub-span [{},{}) overlaps a sibling", span.start, span.end),
                    });
                }
                last_end = span.end;
                out.push(Quote {
                    quote_id: next_id,
                    comment_index: q.comment_index,
                    span: Span::new(q.span.start + span.start, q.span.start + span.end),
                    text: parent_chars[span.start..span.end].iter().collect(),
                    labels: Some(*labels),
                });
                next_id += 1;
            }
        } else {
            let mut q = q.clone();
            if let Some((_, labels)) = whole.get(&q.quote_id) {
                q.labels = Some(*labels);
            }
            out.push(q);
        }
    }
    out.sort_by_key(|q| (q.comment_index, q.span.start));
    Ok(out)
}

/// Label totals over a labeled corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub quotes: usize,
    pub labeled: usize,
    pub argumentative: usize,
    pub non_argumentative: usize,
    pub claim: usize,
    pub ground: usize,
    pub warrant: usize,
    pub support: usize,
    pub against: usize,
}

impl CorpusSummary {
    pub fn from_quotes<'a>(quotes: impl IntoIterator<Item = &'a Quote>) -> Self {
        let mut s = CorpusSummary::default();
        for q in quotes {
            s.quotes += 1;
            let Some(l) = q.labels else { continue };
            s.labeled += 1;
            match l.level1 {
                Level1::Argumentative => s.argumentative += 1,
                Level1::NonArgumentative => s.non_argumentative += 1,
            }
            match l.component {
                Some(Component::Claim) => s.claim += 1,
                Some(Component::Ground) => s.ground += 1,
                Some(Component::Warrant) => s.warrant += 1,
                None => {}
            }
            match l.standpoint {
                Some(Standpoint::Support) => s.support += 1,
                Some(Standpoint::Against) => s.against += 1,
                None => {}
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const HEADER: &str = "quote_id,level1,component,standpoint,argument_id,span_start,span_end\n";

    fn quotes(n: u32) -> Vec<Quote> {
        (0..n)
            .map(|i| Quote {
                quote_id: i,
                comment_index: 0,
                span: Span::new(i as usize * 100, i as usize * 100 + 80),
                text: "x".repeat(80),
                labels: None,
            })
            .collect()
    }

    #[test]
    fn direct_attach() {
        let csv = format!("{HEADER}q7,argumentative,warrant,support,3,,\n");
        let out = import_gold_labels(csv.as_bytes(), &quotes(10)).unwrap();
        let q7 = out.iter().find(|q| q.quote_id == 7).unwrap();
        let l = q7.labels.unwrap();
        assert_eq!(l.component, Some(Component::Warrant));
        assert_eq!(l.standpoint, Some(Standpoint::Support));
        assert_eq!(l.argument_id, Some(3));
        assert_eq!(out.iter().filter(|q| q.labels.is_some()).count(), 1);
    }

    #[test]
    fn non_argumentative_with_component_rejected() {
        let csv = format!("{HEADER}q1,argumentative,claim,support,,,\nq9,non_argumentative,claim,,,,\n");
        match import_gold_labels(csv.as_bytes(), &quotes(10)) {
            Err(Error::Validation { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_quote_is_reference_error() {
        let csv = format!("{HEADER}q42,non_argumentative,,,,,\n");
        assert!(matches!(
            import_gold_labels(csv.as_bytes(), &quotes(3)),
            Err(Error::Reference { row: 1, .. })
        ));
    }

    #[test]
    fn sub_segments_replace_parent() {
        let csv = format!(
            "{HEADER}q2,argumentative,claim,support,1,0,40\nq2,argumentative,ground,support,1,40,80\n"
        );
        let out = import_gold_labels(csv.as_bytes(), &quotes(3)).unwrap();
        assert_eq!(out.len(), 4);
        assert!(out.iter().all(|q| q.quote_id != 2));
        let children: Vec<_> = out.iter().filter(|q| q.quote_id >= 3).collect();
        assert_eq!(children.len(), 2);
        assert_eq!(children[0].span, Span::new(200, 240));
        assert_eq!(children[1].span, Span::new(240, 280));
        assert_eq!(children[0].labels.unwrap().component, Some(Component::Claim));
        assert_eq!(children[1].labels.unwrap().component, Some(Component::Ground));
    }

    #[test]
    fn overlapping_sub_segments_rejected() {
        let csv = format!(
            "{HEADER}q0,non_argumentative,,,,0,50\nq0,non_argumentative,,,,40,80\n"
        );
        assert!(import_gold_labels(csv.as_bytes(), &quotes(1)).is_err());
    }

    fn row_strategy() -> impl Strategy<Value = String> {
        (
            0u32..5,
            prop::sample::select(vec!["argumentative", "non_argumentative", "bogus"]),
            prop::sample::select(vec!["", "claim", "ground", "warrant"]),
            prop::sample::select(vec!["", "support", "against"]),
            prop::sample::select(vec!["", "1", "7"]),
        )
            .prop_map(|(q, l, c, s, a)| format!("q{q},{l},{c},{s},{a},,\n"))
    }

    proptest! {
        #[test]
        fn imported_labels_satisfy_invariants(rows in prop::collection::vec(row_strategy(), 0..6)) {
            let csv = format!("{HEADER}{}", rows.concat());
            if let Ok(out) = import_gold_labels(csv.as_bytes(), &quotes(5)) {
                for q in &out {
                    if let Some(l) = q.labels {
                        prop_assert!(l.validate().is_ok());
                    }
                }
            }
        }
    }
}
