//! Lexicon + suffix-rule part-of-speech tagger over the universal tag set.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::preprocess::is_special_name;

pub const POS_LEXICON: &str = include_str!("../../data/pos_lexicon.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Num,
    Conj,
    Prt,
    Punct,
    X,
}

impl PosTag {
    pub const ALL: [PosTag; 12] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Det,
        PosTag::Adp,
        PosTag::Num,
        PosTag::Conj,
        PosTag::Prt,
        PosTag::Punct,
        PosTag::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Det => "DET",
            PosTag::Adp => "ADP",
            PosTag::Num => "NUM",
            PosTag::Conj => "CONJ",
            PosTag::Prt => "PRT",
            PosTag::Punct => "PUNCT",
            PosTag::X => "X",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown POS tag {s:?}"))
    }
}

impl AsRef<str> for PosTag {
    fn as_ref(&self) -> &str {
        self.as_str()
    }
}

#[derive(Debug, Clone)]
pub struct PosTagger {
    lexicon: HashMap<String, PosTag>,
}

impl PosTagger {
    /// Parses `word<TAB>TAG` lines; the first entry for a word wins.
    pub fn from_lexicon(text: &str) -> Result<Self, String> {
        let mut lexicon = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, tag) = line
                .split_once('\t')
                .ok_or_else(|| format!("line {}: expected word<TAB>TAG", n + 1))?;
            let tag: PosTag = tag.trim().parse().map_err(|e| format!("line {}: {e}", n + 1))?;
            lexicon.entry(word.trim().to_lowercase()).or_insert(tag);
        }
        Ok(PosTagger { lexicon })
    }

    /// The tagger built from the bundled lexicon.
    pub fn bundled() -> &'static PosTagger {
        static TAGGER: OnceLock<PosTagger> = OnceLock::new();
        TAGGER.get_or_init(|| PosTagger::from_lexicon(POS_LEXICON).expect("bundled POS lexicon parses"))
    }

    pub fn tag_token(&self, token: &str) -> PosTag {
        if is_special_name(token) {
            return PosTag::Noun;
        }
        if !token.chars().any(char::is_alphanumeric) {
            return PosTag::Punct;
        }
        let lower = token.to_lowercase();
        if let Some(&t) = self.lexicon.get(&lower) {
            return t;
        }
        if lower.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',') {
            return PosTag::Num;
        }
        if lower.len() > 3 && lower.ends_with("ly") {
            return PosTag::Adv;
        }
        if lower.len() > 4 && (lower.ends_with("ing") || lower.ends_with("ed")) {
            return PosTag::Verb;
        }
        if let Some(stem) = lower.strip_suffix('s') {
            match self.lexicon.get(stem) {
                Some(PosTag::Noun) => return PosTag::Noun,
                Some(PosTag::Verb) => return PosTag::Verb,
                _ => {}
            }
        }
        for (suffix, tag) in [
            ("tion", PosTag::Noun),
            ("ment", PosTag::Noun),
            ("ness", PosTag::Noun),
            ("ity", PosTag::Noun),
            ("ful", PosTag::Adj),
            ("ous", PosTag::Adj),
            ("able", PosTag::Adj),
            ("ible", PosTag::Adj),
            ("ive", PosTag::Adj),
        ] {
            if lower.len() > suffix.len() + 2 && lower.ends_with(suffix) {
                return tag;
            }
        }
        PosTag::X
    }

    pub fn tag<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<PosTag> {
        tokens.iter().map(|t| self.tag_token(t.as_ref())).collect()
    }
}

/// Tags surface tokens with the bundled tagger.
pub fn pos_tag<S: AsRef<str>>(tokens: &[S]) -> Vec<PosTag> {
    PosTagger::bundled().tag(tokens)
}
