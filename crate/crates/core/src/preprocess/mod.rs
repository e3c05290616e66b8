//! Quote filtering, special-token replacement, tokenization and stemming.

mod special;
mod stem;
mod tokenize;

pub use special::{contains_code, replace_special_tokens, rules, SpecialToken, SpecialTokenRule};
pub use stem::{stem, STEMMER_RULES};
pub use tokenize::{is_special_name, lexical_form, tokenize, TokenMode, CONTRACTIONS};

use serde::{Deserialize, Serialize};

use crate::corpus::Quote;

/// Token views of one quote after special-token replacement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedQuote {
    pub quote_id: u32,
    pub surface_tokens: Vec<String>,
    pub lexical_tokens: Vec<String>,
}

impl TokenizedQuote {
    pub fn from_text(quote_id: u32, text: &str) -> Self {
        let replaced = replace_special_tokens(text);
        let surface_tokens = tokenize(&replaced, TokenMode::Surface);
        let lexical_tokens = surface_tokens.iter().filter_map(|t| lexical_form(t)).collect();
        TokenizedQuote {
            quote_id,
            surface_tokens,
            lexical_tokens,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub kept: Vec<Quote>,
    pub dropped: usize,
}

/// Keeps quotes with at least one alphabetic character.
pub fn filter_quotes(quotes: Vec<Quote>) -> FilterOutcome {
    let before = quotes.len();
    let kept: Vec<Quote> = quotes
        .into_iter()
        .filter(|q| q.text.chars().any(char::is_alphabetic))
        .collect();
    FilterOutcome {
        dropped: before - kept.len(),
        kept,
    }
}
