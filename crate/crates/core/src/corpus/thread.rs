use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{AuthorRole, IssueThread};
use crate::error::{Error, Result};

/// Wire form of a thread: `{"id", "title", "comments": [{"author",
/// "association", "created_at", "body"}]}` with `comments[0]` being the
/// issue description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct ThreadDoc {
    id: u64,
    title: String,
    comments: Vec<CommentDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CommentDoc {
    author: String,
    association: String,
    created_at: String,
    body: String,
}

impl From<IssueThread> for ThreadDoc {
    fn from(thread: IssueThread) -> Self {
        ThreadDoc {
            id: thread.id,
            title: thread.title,
            comments: thread
                .comments
                .into_iter()
                .map(|c| CommentDoc {
                    author: c.author,
                    association: c.author_role.association().to_string(),
                    created_at: format_timestamp(c.created_at),
                    body: c.body,
                })
                .collect(),
        }
    }
}

impl TryFrom<ThreadDoc> for IssueThread {
    type Error = String;

    fn try_from(doc: ThreadDoc) -> std::result::Result<Self, Self::Error> {
        let mut parts = Vec::with_capacity(doc.comments.len());
        for (i, c) in doc.comments.into_iter().enumerate() {
            let ts = parse_timestamp(&c.created_at)
                .map_err(|e| format!("comments[{i}].created_at: {e}"))?;
            parts.push((c.author, AuthorRole::from_association(&c.association), ts, c.body));
        }
        Ok(IssueThread::from_parts(doc.id, doc.title, parts))
    }
}

pub(crate) fn format_timestamp(secs: i64) -> String {
    DateTime::<Utc>::from_timestamp(secs, 0)
        .unwrap_or_default()
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

pub(crate) fn parse_timestamp(s: &str) -> std::result::Result<i64, String> {
    DateTime::parse_from_rfc3339(s.trim())
        .map(|dt| dt.timestamp())
        .map_err(|e| format!("invalid ISO-8601 timestamp {s:?}: {e}"))
}

fn byte_offset(raw: &[u8], line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, l) in raw.split(|b| *b == b'\n').enumerate() {
        if i + 1 == line {
            return (offset + column.saturating_sub(1)).min(raw.len());
        }
        offset += l.len() + 1;
    }
    raw.len()
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Schema {
        path: format!("{path}.{key}"),
        message: "missing required field".into(),
    })
}

fn str_field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a str> {
    field(obj, key, path)?.as_str().ok_or_else(|| Error::Schema {
        path: format!("{path}.{key}"),
        message: "expected a string".into(),
    })
}

/// Parses one thread document.
///
/// Malformed JSON yields [`Error::Parse`] with the byte offset of the
/// failure; missing or mistyped fields yield [`Error::Schema`] naming the
/// JSON path (e.g. `$.comments[1].author`).
pub fn parse_thread(raw: &[u8]) -> Result<IssueThread> {
    let doc: Value = serde_json::from_slice(raw).map_err(|e| Error::Parse {
        offset: byte_offset(raw, e.line(), e.column()),
        message: e.to_string(),
    })?;
    if !doc.is_object() {
        return Err(Error::Schema {
            path: "$".into(),
            message: "expected an object".into(),
        });
    }
    let id = field(&doc, "id", "$")?.as_u64().ok_or_else(|| Error::Schema {
        path: "$.id".into(),
        message: "expected a non-negative integer".into(),
    })?;
    let title = str_field(&doc, "title", "$")?.to_string();
    let comments = field(&doc, "comments", "$")?
        .as_array()
        .ok_or_else(|| Error::Schema {
            path: "$.comments".into(),
            message: "expected an array".into(),
        })?;
    if comments.is_empty() {
        return Err(Error::Schema {
            path: "$.comments".into(),
            message: "comments[0] (the issue description) is required".into(),
        });
    }

    let mut parts = Vec::with_capacity(comments.len());
    for (i, c) in comments.iter().enumerate() {
        let path = format!("$.comments[{i}]");
        let author = str_field(c, "author", &path)?.to_string();
        let association = str_field(c, "association", &path)?;
        let created_raw = str_field(c, "created_at", &path)?;
        let created_at = parse_timestamp(created_raw).map_err(|message| Error::Schema {
            path: format!("{path}.created_at"),
            message,
        })?;
        let body = str_field(c, "body", &path)?.to_string();
        parts.push((author, AuthorRole::from_association(association), created_at, body));
    }
    Ok(IssueThread::from_parts(id, title, parts))
}

/// Renders a thread in the input schema; `parse_thread` reads it back to an
/// equal value.
pub fn thread_to_json(thread: &IssueThread) -> String {
    serde_json::to_string_pretty(&ThreadDoc::from(thread.clone()))
        .expect("thread documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "id": 7, "title": "Tabs",
        "comments": [
            {"author": "ann", "association": "NONE", "created_at": "2020-01-01T00:00:00Z", "body": "Please add tabs."},
            {"author": "bob", "association": "FIRST_TIME_CONTRIBUTOR", "created_at": "2020-01-01T00:01:00Z", "body": "+1"}
        ]
    }"#;

    #[test]
    fn minimal_document() {
        let t = parse_thread(MINIMAL.as_bytes()).unwrap();
        assert_eq!(t.comments.len(), 2);
        assert_eq!(t.comments[0].index, 0);
        assert_eq!(t.comments[1].index, 1);
        assert_eq!(t.comments[1].author_role, AuthorRole::Other);
        assert_eq!(t.comments[1].created_at - t.comments[0].created_at, 60);
    }

    #[test]
    fn issue_author_flag() {
        let raw = MINIMAL.replace("\"bob\"", "\"ann\"");
        let t = parse_thread(raw.as_bytes()).unwrap();
        assert!(t.comments[0].is_issue_author);
        assert!(t.comments[1].is_issue_author);
        let t = parse_thread(MINIMAL.as_bytes()).unwrap();
        assert!(!t.comments[1].is_issue_author);
    }

    #[test]
    fn malformed_json_reports_offset() {
        let raw = b"{\"id\": 1, \"title\": }";
        match parse_thread(raw) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 19),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_field_reports_path() {
        let raw = MINIMAL.replace("\"author\": \"bob\", ", "");
        match parse_thread(raw.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "$.comments[1].author"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let t = parse_thread(MINIMAL.as_bytes()).unwrap();
        let back = parse_thread(thread_to_json(&t).as_bytes()).unwrap();
        assert_eq!(t, back);
        let via_serde: IssueThread = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(t, via_serde);
    }
}
