//! Rule-based sentence segmentation of comment bodies.
//!
//! Rules, applied per comment:
//!
//! 1. A fenced code block (a line starting with three backticks, through the
//!    next such line or the end of the body) is one segment.
//! 2. A run of consecutive block-quote lines (first non-blank character `>`)
//!    is one segment.
//! 3. Remaining lines form paragraphs separated by blank lines, fences and
//!    block quotes. A paragraph is split after a run of `.`, `!` or `?`
//!    (plus any closing quotes or brackets) when the run is followed by the
//!    end of the paragraph, or by whitespace and then an uppercase letter.
//! 4. No split happens after a word found in the abbreviation list
//!    (`data/abbreviations.txt`). Dots inside a token (version numbers,
//!    URLs, `e.g`) never split because they are not followed by whitespace.
//!
//! Every segment is trimmed of surrounding whitespace and its text is the
//! exact body slice of its span, so joining segment texts with single
//! spaces covers each non-whitespace character of the body exactly once.

use std::collections::HashSet;
use std::sync::OnceLock;

use super::{IssueThread, Quote, Span};

pub const ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

fn abbreviations() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        ABBREVIATIONS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub span: Span,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LineKind {
    Blank,
    Fence,
    Quote,
    Prose,
}

fn classify(line: &[char]) -> LineKind {
    let first = line.iter().position(|c| !c.is_whitespace());
    match first {
        None => LineKind::Blank,
        Some(i) if line[i..].starts_with(&['`', '`', '`']) => LineKind::Fence,
        Some(i) if line[i] == '>' => LineKind::Quote,
        Some(_) => LineKind::Prose,
    }
}

const TERMINALS: &[char] = &['.', '!', '?'];
const CLOSERS: &[char] = &['"', '\'', ')', ']', '”', '’', '*', '_'];

/// Splits a comment body into sentence segments. Pure and deterministic;
/// an empty body yields no segments.
pub fn segment_comment(body: &str) -> Vec<Segment> {
    let chars: Vec<char> = body.chars().collect();
    let mut lines = Vec::new();
    let mut start = 0;
    for (i, c) in chars.iter().enumerate() {
        if *c == '\n' {
            lines.push((start, i));
            start = i + 1;
        }
    }
    lines.push((start, chars.len()));

    let mut ranges: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (ls, le) = lines[i];
        match classify(&chars[ls..le]) {
            LineKind::Blank => i += 1,
            LineKind::Fence if closes_inline(&chars[ls..le]) => {
                ranges.push((ls, le));
                i += 1;
            }
            LineKind::Fence => {
                let mut j = i + 1;
                while j < lines.len() && classify(&chars[lines[j].0..lines[j].1]) != LineKind::Fence {
                    j += 1;
                }
                let last = j.min(lines.len() - 1);
                ranges.push((ls, lines[last].1));
                i = last + 1;
            }
            LineKind::Quote => {
                let mut j = i;
                while j + 1 < lines.len()
                    && classify(&chars[lines[j + 1].0..lines[j + 1].1]) == LineKind::Quote
                {
                    j += 1;
                }
                ranges.push((ls, lines[j].1));
                i = j + 1;
            }
            LineKind::Prose => {
                let mut j = i;
                while j + 1 < lines.len()
                    && classify(&chars[lines[j + 1].0..lines[j + 1].1]) == LineKind::Prose
                {
                    j += 1;
                }
                split_sentences(&chars, ls, lines[j].1, &mut ranges);
                i = j + 1;
            }
        }
    }

    ranges
        .into_iter()
        .filter_map(|(s, e)| trim(&chars, s, e))
        .map(|(s, e)| Segment {
            span: Span::new(s, e),
            text: chars[s..e].iter().collect(),
        })
        .collect()
}

/// A fence line such as "```let x = 1;```" that opens and closes itself.
fn closes_inline(line: &[char]) -> bool {
    let s: String = line.iter().collect();
    let t = s.trim_start();
    t.len() > 6 && t[3..].contains("```")
}

fn trim(chars: &[char], mut s: usize, mut e: usize) -> Option<(usize, usize)> {
    while s < e && chars[s].is_whitespace() {
        s += 1;
    }
    while e > s && chars[e - 1].is_whitespace() {
        e -= 1;
    }
    (s < e).then_some((s, e))
}

fn split_sentences(chars: &[char], start: usize, end: usize, out: &mut Vec<(usize, usize)>) {
    let mut sentence_start = start;
    let mut i = start;
    while i < end {
        if !TERMINALS.contains(&chars[i]) {
            i += 1;
            continue;
        }
        let mark = i;
        let mut j = i + 1;
        while j < end && (TERMINALS.contains(&chars[j]) || CLOSERS.contains(&chars[j])) {
            j += 1;
        }
        let boundary = if j == end {
            true
        } else if chars[j].is_whitespace() {
            let mut k = j;
            while k < end && chars[k].is_whitespace() {
                k += 1;
            }
            k == end || chars[k].is_uppercase()
        } else {
            false
        };
        if boundary && !(chars[mark] == '.' && is_abbreviation(chars, sentence_start, mark)) {
            out.push((sentence_start, j));
            sentence_start = j;
        }
        i = j;
    }
    if sentence_start < end {
        out.push((sentence_start, end));
    }
}

/// True when the token ending in the period at `dot` is a listed abbreviation.
fn is_abbreviation(chars: &[char], floor: usize, dot: usize) -> bool {
    let mut s = dot;
    while s > floor && !chars[s - 1].is_whitespace() {
        s -= 1;
    }
    while s < dot && matches!(chars[s], '(' | '[' | '"' | '\'' | '*' | '_') {
        s += 1;
    }
    let token: String = chars[s..=dot].iter().flat_map(|c| c.to_lowercase()).collect();
    abbreviations().contains(token.as_str())
}

/// Segments every comment of a thread, numbering quotes from 0 in comment
/// order.
pub fn segment_thread(thread: &IssueThread) -> Vec<Quote> {
    let mut quotes = Vec::new();
    for comment in &thread.comments {
        for seg in segment_comment(&comment.body) {
            quotes.push(Quote {
                quote_id: quotes.len() as u32,
                comment_index: comment.index,
                span: seg.span,
                text: seg.text,
                labels: None,
            });
        }
    }
    quotes
}
