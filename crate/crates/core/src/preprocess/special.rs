//! Replacement of platform-specific content with placeholder tokens.

use std::ops::Range;
use std::sync::OnceLock;

use regex::Regex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecialToken {
    CodeBlock,
    CodeSegment,
    Quote,
    Url,
    ScreenName,
    VersionNum,
    IssueReference,
    PlusOne,
    MinusOne,
}

/// One replacement rule. Rules run in ascending `priority`; each rule sees
/// the output of the rules before it.
#[derive(Debug, Clone, Copy)]
pub struct SpecialTokenRule {
    pub token: SpecialToken,
    pub pattern: &'static str,
    pub priority: u8,
}

impl SpecialToken {
    /// Application order.
    pub const PRIORITY: [SpecialToken; 9] = [
        SpecialToken::CodeBlock,
        SpecialToken::CodeSegment,
        SpecialToken::Quote,
        SpecialToken::Url,
        SpecialToken::ScreenName,
        SpecialToken::VersionNum,
        SpecialToken::IssueReference,
        SpecialToken::PlusOne,
        SpecialToken::MinusOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialToken::CodeBlock => "CODE_BLOCK",
            SpecialToken::CodeSegment => "CODE_SEGMENT",
            SpecialToken::Quote => "QUOTE",
            SpecialToken::Url => "URL",
            SpecialToken::ScreenName => "SCREEN_NAME",
            SpecialToken::VersionNum => "VERSION_NUM",
            SpecialToken::IssueReference => "ISSUE_REFERENCE",
            SpecialToken::PlusOne => "PLUS_ONE",
            SpecialToken::MinusOne => "MINUS_ONE",
        }
    }

    pub fn from_name(name: &str) -> Option<SpecialToken> {
        Self::PRIORITY.into_iter().find(|t| t.name() == name)
    }

    fn pattern(self) -> &'static str {
        match self {
            SpecialToken::CodeBlock => "``` through the next ``` (or end of text)",
            SpecialToken::CodeSegment => "a backtick run closed by a run of equal length on the same line",
            SpecialToken::Quote => "consecutive lines whose first non-blank character is >",
            SpecialToken::Url => "scheme://non-space, trailing punctuation excluded",
            SpecialToken::ScreenName => "@login (alphanumerics and inner hyphens), not inside a word",
            SpecialToken::VersionNum => "optional v, digit groups joined by at least two dots",
            SpecialToken::IssueReference => "# followed by digits",
            SpecialToken::PlusOne => "+ followed by digits",
            SpecialToken::MinusOne => "- followed by digits",
        }
    }
}

pub fn rules() -> Vec<SpecialTokenRule> {
    SpecialToken::PRIORITY
        .iter()
        .enumerate()
        .map(|(i, &token)| SpecialTokenRule {
            token,
            pattern: token.pattern(),
            priority: i as u8,
        })
        .collect()
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn prev_char(text: &str, at: usize) -> Option<char> {
    text[..at].chars().next_back()
}

fn next_char(text: &str, at: usize) -> Option<char> {
    text[at..].chars().next()
}

struct Patterns {
    url: Regex,
    screen_name: Regex,
    version: Regex,
    issue: Regex,
    plus: Regex,
    minus: Regex,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| Patterns {
        url: Regex::new(r"[A-Za-z][A-Za-z0-9+.\-]*://\S+").unwrap(),
        screen_name: Regex::new(r"@[A-Za-z0-9](?:[A-Za-z0-9\-]*[A-Za-z0-9])?").unwrap(),
        version: Regex::new(r"v?[0-9]+(?:\.[0-9]+){2,}").unwrap(),
        issue: Regex::new(r"#[0-9]+").unwrap(),
        plus: Regex::new(r"\+[0-9]+").unwrap(),
        minus: Regex::new(r"-[0-9]+").unwrap(),
    })
}

fn find_code_blocks(text: &str) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut pos = 0;
    while let Some(i) = text[pos..].find("```") {
        let start = pos + i;
        let end = match text[start + 3..].find("```") {
            Some(j) => start + 3 + j + 3,
            None => text.len(),
        };
        out.push(start..end);
        pos = end;
    }
    out
}

fn find_code_segments(text: &str) -> Vec<Range<usize>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        if b[i] != b'`' {
            i += 1;
            continue;
        }
        let open = i;
        while i < b.len() && b[i] == b'`' {
            i += 1;
        }
        let width = i - open;
        let mut k = i;
        let mut close = None;
        while k < b.len() && b[k] != b'\n' {
            if b[k] == b'`' {
                let run = k;
                while k < b.len() && b[k] == b'`' {
                    k += 1;
                }
                if k - run == width {
                    close = Some(k);
                    break;
                }
            } else {
                k += 1;
            }
        }
        if let Some(end) = close {
            out.push(open..end);
            i = end;
        }
    }
    out
}

fn find_quotes(text: &str) -> Vec<Range<usize>> {
    let mut out: Vec<Range<usize>> = Vec::new();
    let mut offset = 0;
    let mut prev_quoted = false;
    for line in text.split('\n') {
        let quoted = line.trim_start().starts_with('>');
        if quoted {
            let r = offset..offset + line.len();
            match out.last_mut() {
                Some(last) if prev_quoted => last.end = r.end,
                _ => out.push(r),
            }
        }
        prev_quoted = quoted;
        offset += line.len() + 1;
    }
    out
}

fn find_urls(text: &str) -> Vec<Range<usize>> {
    const TRAILING: &[char] = &['.', ',', ';', ':', '!', '?', ')', ']', '}', '\'', '"', '>'];
    patterns()
        .url
        .find_iter(text)
        .filter_map(|m| {
            if prev_char(text, m.start())
                .is_some_and(|c| is_word(c) || matches!(c, '+' | '.' | '-'))
            {
                return None;
            }
            let trimmed = m.as_str().trim_end_matches(TRAILING);
            let sep = trimmed.find("://")?;
            (trimmed.len() > sep + 3).then(|| m.start()..m.start() + trimmed.len())
        })
        .collect()
}

/// Regex candidates whose neighbours pass the boundary predicates.
fn bounded(
    re: &Regex,
    text: &str,
    bad_prev: impl Fn(char) -> bool,
    bad_next: impl Fn(char) -> bool,
) -> Vec<Range<usize>> {
    re.find_iter(text)
        .filter(|m| {
            !prev_char(text, m.start()).is_some_and(&bad_prev)
                && !next_char(text, m.end()).is_some_and(&bad_next)
        })
        .map(|m| m.range())
        .collect()
}

fn find(token: SpecialToken, text: &str) -> Vec<Range<usize>> {
    let p = patterns();
    match token {
        SpecialToken::CodeBlock => find_code_blocks(text),
        SpecialToken::CodeSegment => find_code_segments(text),
        SpecialToken::Quote => find_quotes(text),
        SpecialToken::Url => find_urls(text),
        SpecialToken::ScreenName => bounded(&p.screen_name, text, is_word, |c| is_word(c) || c == '-'),
        SpecialToken::VersionNum => bounded(&p.version, text, |c| is_word(c) || c == '.', is_word),
        SpecialToken::IssueReference => {
            bounded(&p.issue, text, |c| is_word(c) || c == '&' || c == '#', is_word)
        }
        SpecialToken::PlusOne => bounded(&p.plus, text, |c| is_word(c) || c == '+', is_word),
        SpecialToken::MinusOne => bounded(&p.minus, text, |c| is_word(c) || c == '-', is_word),
    }
}

fn splice(text: &str, ranges: &[Range<usize>], name: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for r in ranges {
        out.push_str(&text[last..r.start]);
        out.push_str(name);
        last = r.end;
    }
    out.push_str(&text[last..]);
    out
}

/// Replaces every special-content match with its token name, rule by rule
/// in priority order. Idempotent.
pub fn replace_special_tokens(text: &str) -> String {
    let mut current = text.to_string();
    for token in SpecialToken::PRIORITY {
        let ranges = find(token, &current);
        if !ranges.is_empty() {
            current = splice(&current, &ranges, token.name());
        }
    }
    current
}

/// True when `text` contains a code block or inline code span.
pub fn contains_code(text: &str) -> bool {
    !find_code_blocks(text).is_empty() || !find_code_segments(text).is_empty()
}
