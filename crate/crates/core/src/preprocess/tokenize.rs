use std::collections::HashSet;
use std::sync::OnceLock;

use unicode_normalization::UnicodeNormalization;

use super::special::SpecialToken;
use super::stem::stem;

pub const CONTRACTIONS: &str = include_str!("../../data/contractions.txt");

fn contractions() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        CONTRACTIONS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenMode {
    /// Whitespace split with punctuation kept as separate tokens.
    Surface,
    /// Lowercased, punctuation and contractions dropped, stemmed.
    Lexical,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '’' | '-')
}

/// Splits one whitespace-free chunk into word runs and single punctuation
/// characters. Apostrophes and hyphens between word characters stay inside
/// the word ("don't", "built-in").
fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if is_word_char(chars[i]) {
            let start = i;
            i += 1;
            while i < chars.len() {
                if is_word_char(chars[i]) {
                    i += 1;
                } else if is_joiner(chars[i]) && i + 1 < chars.len() && is_word_char(chars[i + 1]) {
                    i += 2;
                } else {
                    break;
                }
            }
            out.push(chars[start..i].iter().collect());
        } else {
            out.push(chars[i].to_string());
            i += 1;
        }
    }
}

pub fn is_special_name(token: &str) -> bool {
    SpecialToken::from_name(token).is_some()
}

fn is_punctuation(token: &str) -> bool {
    !token.chars().any(char::is_alphanumeric)
}

/// Tokenizes text that has already been through special-token replacement.
pub fn tokenize(text: &str, mode: TokenMode) -> Vec<String> {
    let text: String = text.nfc().collect();
    let mut surface = Vec::new();
    for chunk in text.split_whitespace() {
        split_chunk(chunk, &mut surface);
    }
    match mode {
        TokenMode::Surface => surface,
        TokenMode::Lexical => surface.iter().filter_map(|t| lexical_form(t)).collect(),
    }
}

/// The lexical form of one surface token, or `None` if it is dropped.
pub fn lexical_form(token: &str) -> Option<String> {
    if is_special_name(token) {
        return Some(token.to_string());
    }
    if is_punctuation(token) {
        return None;
    }
    let lower = token.to_lowercase().replace('’', "'");
    if contractions().contains(lower.as_str()) {
        return None;
    }
    Some(stem(&lower))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_and_punctuation() {
        assert_eq!(tokenize("Don't close this!", TokenMode::Lexical), vec!["close", "this"]);
        assert_eq!(
            tokenize("Don't close this!", TokenMode::Surface),
            vec!["Don't", "close", "this", "!"]
        );
        assert_eq!(tokenize("Don’t stop", TokenMode::Lexical), vec!["stop"]);
    }

    #[test]
    fn empty_text() {
        assert!(tokenize("", TokenMode::Surface).is_empty());
        assert!(tokenize("", TokenMode::Lexical).is_empty());
    }

    #[test]
    fn special_names_pass_through() {
        assert_eq!(
            tokenize("See ISSUE_REFERENCE, thanks.", TokenMode::Lexical),
            vec!["see", "ISSUE_REFERENCE", "thank"]
        );
        assert_eq!(
            tokenize("(CODE_SEGMENT)", TokenMode::Surface),
            vec!["(", "CODE_SEGMENT", ")"]
        );
    }

    #[test]
    fn hyphenated_words_stay_whole() {
        assert_eq!(tokenize("built-in tabs...", TokenMode::Surface), vec!["built-in", "tabs", ".", ".", "."]);
    }
}
