//! Position, participant, length, timing and code features of a quote within
//! its thread.

use serde::{Deserialize, Serialize};

use crate::corpus::{AuthorRole, IssueThread, Quote};
use crate::preprocess::contains_code;

pub const CONV_DIM: usize = 13;

pub const CONV_SLOT_NAMES: [&str; CONV_DIM] = [
    "is_owner_or_collaborator",
    "is_member",
    "is_other",
    "is_issue_author",
    "quote_tokens",
    "quote_over_comment_tokens",
    "quote_over_mean_quote_tokens",
    "comment_position",
    "quote_position_in_comment",
    "seconds_since_previous",
    "seconds_until_next",
    "relative_time",
    "comment_has_code",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConversationalFeatures {
    pub slots: [f64; CONV_DIM],
}

impl ConversationalFeatures {
    pub fn as_slice(&self) -> &[f64] {
        &self.slots
    }
}

/// Computes the 13 slots for every quote in `quotes`, which must belong to
/// `thread`. `token_counts[i]` is the surface token count of `quotes[i]`.
///
/// Comment-level token totals and the thread mean are taken over the quotes
/// passed in, so filtered-out quotes do not count.
pub fn conversational_features(
    thread: &IssueThread,
    quotes: &[Quote],
    token_counts: &[usize],
) -> Vec<ConversationalFeatures> {
    assert_eq!(quotes.len(), token_counts.len(), "one token count per quote");
    let n_comments = thread.comments.len();
    let mut comment_tokens = vec![0usize; n_comments];
    let mut comment_quotes = vec![0usize; n_comments];
    for (q, &t) in quotes.iter().zip(token_counts) {
        comment_tokens[q.comment_index] += t;
        comment_quotes[q.comment_index] += 1;
    }
    let mean_tokens = if quotes.is_empty() {
        0.0
    } else {
        token_counts.iter().sum::<usize>() as f64 / quotes.len() as f64
    };
    let t_min = thread.comments.iter().map(|c| c.created_at).min().unwrap_or(0);
    let t_max = thread.comments.iter().map(|c| c.created_at).max().unwrap_or(0);
    let has_code: Vec<bool> = thread.comments.iter().map(|c| contains_code(&c.body)).collect();

    let mut seen_in_comment = vec![0usize; n_comments];
    quotes
        .iter()
        .zip(token_counts)
        .map(|(q, &tokens)| {
            let ci = q.comment_index;
            let c = &thread.comments[ci];
            seen_in_comment[ci] += 1;
            let mut s = [0.0; CONV_DIM];
            match c.author_role {
                AuthorRole::Owner | AuthorRole::Collaborator => s[0] = 1.0,
                AuthorRole::Member => s[1] = 1.0,
                AuthorRole::Other => s[2] = 1.0,
            }
            s[3] = f64::from(u8::from(c.is_issue_author));
            s[4] = tokens as f64;
            s[5] = ratio(tokens as f64, comment_tokens[ci] as f64);
            s[6] = ratio(tokens as f64, mean_tokens);
            s[7] = if n_comments > 1 {
                ci as f64 / (n_comments - 1) as f64
            } else {
                0.0
            };
            s[8] = seen_in_comment[ci] as f64 / comment_quotes[ci] as f64;
            if ci > 0 {
                s[9] = (c.created_at - thread.comments[ci - 1].created_at).max(0) as f64;
            }
            if ci + 1 < n_comments {
                s[10] = (thread.comments[ci + 1].created_at - c.created_at).max(0) as f64;
            }
            s[11] = ratio((c.created_at - t_min) as f64, (t_max - t_min) as f64);
            s[12] = f64::from(u8::from(has_code[ci]));
            ConversationalFeatures { slots: s }
        })
        .collect()
}

/// Slots without a natural upper bound (token counts, seconds). They are
/// compressed with `ln(1 + x)` before scaling.
pub const CONV_LOG_SLOTS: [usize; 4] = [4, 6, 9, 10];

/// Column scaling for the conversational block, fitted on training rows:
/// log-compression of the unbounded slots, then division by the largest
/// absolute training value. All-zero columns are left unscaled. Output
/// stays nonnegative, so complement NB can consume it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvScaler {
    pub max_abs: [f64; CONV_DIM],
}

fn compress(slot: usize, v: f64) -> f64 {
    if CONV_LOG_SLOTS.contains(&slot) {
        v.max(0.0).ln_1p()
    } else {
        v
    }
}

impl ConvScaler {
    pub fn fit<'a>(rows: impl IntoIterator<Item = &'a ConversationalFeatures>) -> Self {
        let mut max_abs = [0.0f64; CONV_DIM];
        for r in rows {
            for (i, (m, v)) in max_abs.iter_mut().zip(r.slots).enumerate() {
                *m = m.max(compress(i, v).abs());
            }
        }
        ConvScaler { max_abs }
    }

    pub fn transform(&self, f: &ConversationalFeatures) -> [f64; CONV_DIM] {
        let mut out = [0.0; CONV_DIM];
        for (i, o) in out.iter_mut().enumerate() {
            let v = compress(i, f.slots[i]);
            *o = if self.max_abs[i] > 0.0 { v / self.max_abs[i] } else { v };
        }
        out
    }

    pub(crate) fn hash_into(&self, h: &mut impl sha2::Digest) {
        for m in self.max_abs {
            h.update(m.to_bits().to_le_bytes());
        }
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}
