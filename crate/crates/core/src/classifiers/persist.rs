//! Plain-text model files.
//!
//! ```text
//! argmine-model 1 kind=svm dim=3 classes=a,b hyper=1.0000000000000000e0 seed=42 class_weights=... features=<sha256|->
//! b 0.0000000000000000e0 1.2500000000000000e-1 ...
//! ```
//!
//! Each following line is `<class> <bias or log-prior> <weights...>`, every
//! number printed with 17 significant digits so that reading it back is
//! exact. Binary SVMs have a single line for the positive class.

use std::collections::BTreeMap;

use super::{Classifier, CnbModel, LinearModel, ModelKind};
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "argmine-model";

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn nums(vs: &[f64]) -> String {
    vs.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",")
}

/// Renders a model, tagging it with the fingerprint of the feature models it
/// was trained against.
pub fn save_model(model: &Classifier, feature_fingerprint: Option<&str>) -> String {
    let mut out = String::new();
    let (extra, rows): (String, Vec<(&str, f64, &[f64])>) = match model {
        Classifier::Svm(m) => {
            let names: Vec<&str> = if m.classes.len() == 2 {
                vec![m.classes[1].as_str()]
            } else {
                m.classes.iter().map(String::as_str).collect()
            };
            (
                format!(" seed={} class_weights={}", m.seed, nums(&m.class_weights)),
                names
                    .into_iter()
                    .zip(&m.biases)
                    .zip(&m.weights)
                    .map(|((c, b), w)| (c, *b, w.as_slice()))
                    .collect(),
            )
        }
        Classifier::Cnb(m) => (
            String::new(),
            m.classes
                .iter()
                .zip(&m.log_priors)
                .zip(&m.weights)
                .map(|((c, p), w)| (c.as_str(), *p, w.as_slice()))
                .collect(),
        ),
    };
    out.push_str(&format!(
        "{MAGIC} {MODEL_FORMAT_VERSION} kind={} dim={} classes={} hyper={}{} features={}\n",
        model.kind(),
        model.dim(),
        model.classes().join(","),
        num(model.hyperparameter()),
        extra,
        feature_fingerprint.unwrap_or("-"),
    ));
    for (class, lead, w) in rows {
        out.push_str(class);
        out.push(' ');
        out.push_str(&num(lead));
        for v in w {
            out.push(' ');
            out.push_str(&num(*v));
        }
        out.push('\n');
    }
    out
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::ModelFormat {
        line,
        message: message.into(),
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| format_err(line, format!("invalid number {s:?}")))
}

/// Parses a model file; returns the model and its feature fingerprint.
pub fn load_model(text: &str) -> Result<(Classifier, Option<String>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| format_err(1, "empty model file"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(format_err(1, "missing model header"));
    }
    let version = parts.next().unwrap_or_default();
    if version != MODEL_FORMAT_VERSION.to_string() {
        return Err(format_err(1, format!("unsupported model format version {version:?}")));
    }
    let fields: BTreeMap<&str, &str> = parts.filter_map(|p| p.split_once('=')).collect();
    let field = |k: &str| fields.get(k).copied().ok_or_else(|| format_err(1, format!("header lacks {k}")));
    let kind: ModelKind = field("kind")?.parse().map_err(|_| format_err(1, "unknown model kind"))?;
    let dim: usize = field("dim")?.parse().map_err(|_| format_err(1, "invalid dim"))?;
    let classes: Vec<String> = field("classes")?.split(',').map(String::from).collect();
    if classes.len() < 2 {
        return Err(format_err(1, "need at least two classes"));
    }
    let hyper = parse_f64(field("hyper")?, 1)?;
    let fingerprint = match field("features")? {
        "-" => None,
        fp => Some(fp.to_string()),
    };

    let mut names = Vec::new();
    let mut leads = Vec::new();
    let mut weights = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let mut toks = line.split(' ');
        let name = toks.next().unwrap_or_default().to_string();
        let lead = parse_f64(toks.next().ok_or_else(|| format_err(lineno, "missing leading value"))?, lineno)?;
        let w: Vec<f64> = toks.map(|t| parse_f64(t, lineno)).collect::<Result<_>>()?;
        if w.len() != dim {
            return Err(format_err(lineno, format!("expected {dim} weights, found {}", w.len())));
        }
        names.push(name);
        leads.push(lead);
        weights.push(w);
    }

    let model = match kind {
        ModelKind::Svm => {
            let expected: Vec<String> = if classes.len() == 2 { vec![classes[1].clone()] } else { classes.clone() };
            if names != expected {
                return Err(format_err(2, format!("weight rows {names:?} do not match classes {expected:?}")));
            }
            let seed: u64 = field("seed")?.parse().map_err(|_| format_err(1, "invalid seed"))?;
            let class_weights: Vec<f64> = field("class_weights")?
                .split(',')
                .map(|t| parse_f64(t, 1))
                .collect::<Result<_>>()?;
            Classifier::Svm(LinearModel {
                classes,
                dim,
                c: hyper,
                seed,
                class_weights,
                weights,
                biases: leads,
                diagnostics: Vec::new(),
            })
        }
        ModelKind::Cnb => {
            if names != classes {
                return Err(format_err(2, format!("weight rows {names:?} do not match classes {classes:?}")));
            }
            Classifier::Cnb(CnbModel {
                classes,
                dim,
                alpha: hyper,
                weights,
                log_priors: leads,
            })
        }
    };
    Ok((model, fingerprint))
}
