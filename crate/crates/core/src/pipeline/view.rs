use std::fs;
use std::path::{Path, PathBuf};

use super::AnnotatedThread;
use crate::error::{Error, Result};

/// Viewer JSON for a thread, optionally keeping only the first
/// `max_comments` comments. Keys come out in a fixed order.
pub fn export_view_json(annotated: &AnnotatedThread, max_comments: Option<usize>) -> String {
    let view = match max_comments {
        Some(n) => annotated.truncated(n),
        None => annotated.clone(),
    };
    let mut s = serde_json::to_string_pretty(&view).expect("annotated thread serializes");
    s.push('\n');
    s
}

/// Parses a viewer file and checks that its argument index matches its
/// quotes.
pub fn read_view_json(text: &str) -> Result<AnnotatedThread> {
    let thread: AnnotatedThread = serde_json::from_str(text).map_err(|e| Error::Schema {
        path: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if thread.arguments != thread.compute_arguments() {
        return Err(Error::Schema {
            path: "$.arguments".into(),
            message: "argument index does not match quote labels".into(),
        });
    }
    Ok(thread)
}

/// Writes `<dir>/<id>.json` and returns its path.
pub fn write_view_file(dir: &Path, annotated: &AnnotatedThread, max_comments: Option<usize>) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", annotated.id));
    fs::write(&path, export_view_json(annotated, max_comments))?;
    Ok(path)
}
