//! Loading the JSON documents the subcommands exchange.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use argmine::corpus::{parse_thread, LabeledThread};
use argmine::pipeline::{read_view_json, AnnotatedThread};
use serde_json::Value;

/// Expands directories to their `*.json` files, sorted by name.
pub fn expand_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("reading {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file() && f.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        bail!("no input files found");
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A segmented (possibly labeled) thread, or a raw thread document which
/// is segmented on the fly.
pub fn load_labeled(path: &Path) -> Result<LabeledThread> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if v.get("thread").is_some() {
        Ok(serde_json::from_value(v).with_context(|| format!("{} is not a segmented thread", path.display()))?)
    } else {
        let thread = parse_thread(text.as_bytes()).with_context(|| path.display().to_string())?;
        Ok(LabeledThread::unlabeled(thread))
    }
}

pub fn load_corpus(paths: &[PathBuf]) -> Result<Vec<LabeledThread>> {
    expand_inputs(paths)?.iter().map(|p| load_labeled(p)).collect()
}

/// A viewer-schema file, or any thread form with gold labels only.
pub fn load_annotated(path: &Path) -> Result<AnnotatedThread> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if v.get("arguments").is_some() {
        Ok(read_view_json(&text).with_context(|| path.display().to_string())?)
    } else {
        Ok(AnnotatedThread::from_gold(&load_labeled(path)?))
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}
