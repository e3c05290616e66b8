//! Threads, comments, quotes and the two-level label schema.
//!
//! A thread is the issue description (comment 0) followed by its replies.
//! Each comment is split into quotes, the unit that gets labeled and
//! classified.

mod gold;
mod segment;
mod thread;

pub use gold::{import_gold_labels, read_label_rows, CorpusSummary, LabelRecord};
pub use segment::{segment_comment, segment_thread, Segment, ABBREVIATIONS};
pub use thread::{parse_thread, thread_to_json};
pub(crate) use thread::format_timestamp;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The author's relationship to the repository, as reported by the platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuthorRole {
    Owner,
    Collaborator,
    Member,
    Other,
}

impl AuthorRole {
    /// Maps a platform association string (`OWNER`, `MEMBER`, ...) onto the
    /// closed role set. Anything unrecognized is `Other`.
    pub fn from_association(value: &str) -> Self {
        match value.trim().to_ascii_uppercase().as_str() {
            "OWNER" => AuthorRole::Owner,
            "COLLABORATOR" => AuthorRole::Collaborator,
            "MEMBER" => AuthorRole::Member,
            _ => AuthorRole::Other,
        }
    }

    pub fn association(self) -> &'static str {
        match self {
            AuthorRole::Owner => "OWNER",
            AuthorRole::Collaborator => "COLLABORATOR",
            AuthorRole::Member => "MEMBER",
            AuthorRole::Other => "NONE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comment {
    pub index: usize,
    pub author: String,
    pub author_role: AuthorRole,
    pub is_issue_author: bool,
    /// Seconds since the Unix epoch, UTC.
    pub created_at: i64,
    pub body: String,
}

/// An issue and its discussion, ordered by comment index (not by time).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "thread::ThreadDoc", try_from = "thread::ThreadDoc")]
pub struct IssueThread {
    pub id: u64,
    pub title: String,
    pub comments: Vec<Comment>,
}

impl IssueThread {
    /// Builds a thread from `(author, role, created_at, body)` tuples,
    /// assigning indices and deriving `is_issue_author` from comment 0.
    pub fn from_parts(
        id: u64,
        title: impl Into<String>,
        parts: Vec<(String, AuthorRole, i64, String)>,
    ) -> Self {
        let opener = parts.first().map(|p| p.0.clone());
        let comments = parts
            .into_iter()
            .enumerate()
            .map(|(index, (author, author_role, created_at, body))| Comment {
                index,
                is_issue_author: opener.as_deref() == Some(author.as_str()),
                author,
                author_role,
                created_at,
                body,
            })
            .collect();
        IssueThread {
            id,
            title: title.into(),
            comments,
        }
    }
}

/// Half-open range of character (Unicode scalar) offsets into a comment body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

impl From<[usize; 2]> for Span {
    fn from(v: [usize; 2]) -> Self {
        Span { start: v[0], end: v[1] }
    }
}

impl From<Span> for [usize; 2] {
    fn from(s: Span) -> Self {
        [s.start, s.end]
    }
}

/// Slices `text` by character offsets.
pub fn char_slice(text: &str, span: Span) -> &str {
    let mut indices = text.char_indices().map(|(i, _)| i).chain(std::iter::once(text.len()));
    let start = indices.nth(span.start).unwrap_or(text.len());
    let end = if span.end == span.start {
        start
    } else {
        indices.nth(span.end - span.start - 1).unwrap_or(text.len())
    };
    &text[start..end]
}

/// The minimal labeled unit: a sentence or a manually split segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quote {
    #[serde(rename = "id")]
    pub quote_id: u32,
    pub comment_index: usize,
    pub span: Span,
    pub text: String,
    #[serde(default)]
    pub labels: Option<LabelSet>,
}

macro_rules! label_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let norm = s.trim().to_ascii_lowercase().replace('-', "_");
                match norm.as_str() {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!("unknown {} value {:?}", stringify!($name), s)),
                }
            }
        }
    };
}

label_enum!(
    /// Level-1 code.
    Level1 {
        Argumentative => "argumentative",
        NonArgumentative => "non_argumentative",
    }
);

label_enum!(
    /// Argumentation component (Level-2).
    Component {
        Claim => "claim",
        Ground => "ground",
        Warrant => "warrant",
    }
);

label_enum!(
    /// Standpoint relative to the argument's original claim (Level-2).
    Standpoint {
        Support => "support",
        Against => "against",
    }
);

/// One code per dimension. Argumentative quotes carry a component and a
/// standpoint; non-argumentative quotes carry nothing else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLabelSet")]
pub struct LabelSet {
    pub level1: Level1,
    pub component: Option<Component>,
    pub standpoint: Option<Standpoint>,
    pub argument_id: Option<u32>,
}

#[derive(Deserialize)]
struct RawLabelSet {
    level1: Level1,
    #[serde(default)]
    component: Option<Component>,
    #[serde(default)]
    standpoint: Option<Standpoint>,
    #[serde(default)]
    argument_id: Option<u32>,
}

impl TryFrom<RawLabelSet> for LabelSet {
    type Error = String;

    fn try_from(raw: RawLabelSet) -> Result<Self, Self::Error> {
        LabelSet::new(raw.level1, raw.component, raw.standpoint, raw.argument_id)
    }
}

impl LabelSet {
    pub fn new(
        level1: Level1,
        component: Option<Component>,
        standpoint: Option<Standpoint>,
        argument_id: Option<u32>,
    ) -> Result<Self, String> {
        let labels = LabelSet {
            level1,
            component,
            standpoint,
            argument_id,
        };
        labels.validate()?;
        Ok(labels)
    }

    pub fn argumentative(
        component: Component,
        standpoint: Standpoint,
        argument_id: Option<u32>,
    ) -> Self {
        LabelSet {
            level1: Level1::Argumentative,
            component: Some(component),
            standpoint: Some(standpoint),
            argument_id,
        }
    }

    pub fn non_argumentative() -> Self {
        LabelSet {
            level1: Level1::NonArgumentative,
            component: None,
            standpoint: None,
            argument_id: None,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self.level1 {
            Level1::Argumentative => {
                if self.component.is_none() {
                    return Err("argumentative quote without a component".into());
                }
                if self.standpoint.is_none() {
                    return Err("argumentative quote without a standpoint".into());
                }
            }
            Level1::NonArgumentative => {
                if self.component.is_some()
                    || self.standpoint.is_some()
                    || self.argument_id.is_some()
                {
                    return Err(
                        "non-argumentative quote must not carry component, standpoint or argument id"
                            .into(),
                    );
                }
            }
        }
        Ok(())
    }

    pub fn is_argumentative(&self) -> bool {
        self.level1 == Level1::Argumentative
    }
}

/// The closed code enumerations with display names.
#[derive(Debug, Clone, Serialize)]
pub struct Codebook {
    pub version: &'static str,
    pub level1: Vec<(Level1, &'static str)>,
    pub components: Vec<(Component, &'static str)>,
    pub standpoints: Vec<(Standpoint, &'static str)>,
}

impl Codebook {
    pub const VERSION: &'static str = "1.0.0";

    pub fn standard() -> Self {
        Codebook {
            version: Self::VERSION,
            level1: vec![
                (Level1::Argumentative, "Argumentative"),
                (Level1::NonArgumentative, "Non-argumentative"),
            ],
            components: vec![
                (Component::Claim, "Claim"),
                (Component::Ground, "Ground"),
                (Component::Warrant, "Warrant"),
            ],
            standpoints: vec![
                (Standpoint::Support, "Support"),
                (Standpoint::Against, "Against"),
            ],
        }
    }
}

/// A thread plus its segmented (and possibly labeled) quotes. This is the
/// on-disk corpus format consumed by `train`, `evaluate` and `export-view`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledThread {
    pub thread: IssueThread,
    pub quotes: Vec<Quote>,
}

impl LabeledThread {
    pub fn unlabeled(thread: IssueThread) -> Self {
        let quotes = segment_thread(&thread);
        LabeledThread { thread, quotes }
    }
}
