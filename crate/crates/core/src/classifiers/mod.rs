//! Linear SVM and Complement Naive Bayes over sparse rows.
//!
//! Labels are class indices into a class list kept in alphabetical order;
//! every argmax breaks ties toward the earlier class.

mod cnb;
mod persist;
mod svm;
mod weights;

pub use cnb::{train_cnb, CnbModel};
pub use persist::{load_model, save_model, MODEL_FORMAT_VERSION};
pub use svm::{
    dual_objective, primal_objective, solve_binary, train_linear_svm, train_linear_svm_with, BinarySvm, LinearModel,
    SolverDiagnostics, SvmOptions, DEFAULT_MAX_EPOCHS, DEFAULT_TOL,
};
pub use weights::{compute_class_weights, ClassWeights};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Svm,
    Cnb,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Svm => "svm",
            ModelKind::Cnb => "cnb",
        }
    }

    /// Name of the tuned hyperparameter.
    pub fn hyper_name(self) -> &'static str {
        match self {
            ModelKind::Svm => "C",
            ModelKind::Cnb => "alpha",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "svm" => Ok(ModelKind::Svm),
            "cnb" => Ok(ModelKind::Cnb),
            other => Err(Error::Config(format!("unknown model {other:?}; expected svm or cnb"))),
        }
    }
}

/// A trained model of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Svm(LinearModel),
    Cnb(CnbModel),
}

impl Classifier {
    pub fn kind(&self) -> ModelKind {
        match self {
            Classifier::Svm(_) => ModelKind::Svm,
            Classifier::Cnb(_) => ModelKind::Cnb,
        }
    }

    pub fn classes(&self) -> &[String] {
        match self {
            Classifier::Svm(m) => &m.classes,
            Classifier::Cnb(m) => &m.classes,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Classifier::Svm(m) => m.dim,
            Classifier::Cnb(m) => m.dim,
        }
    }

    pub fn hyperparameter(&self) -> f64 {
        match self {
            Classifier::Svm(m) => m.c,
            Classifier::Cnb(m) => m.alpha,
        }
    }

    pub fn decision(&self, x: &SparseVector) -> Result<Vec<f64>> {
        match self {
            Classifier::Svm(m) => m.decision(x),
            Classifier::Cnb(m) => m.decision(x),
        }
    }

    pub fn predict(&self, x: &SparseVector) -> Result<usize> {
        match self {
            Classifier::Svm(m) => m.predict(x),
            Classifier::Cnb(m) => m.predict(x),
        }
    }

    pub fn predict_label(&self, x: &SparseVector) -> Result<&str> {
        Ok(&self.classes()[self.predict(x)?])
    }
}

/// Trains `kind` with hyperparameter `hyper` (C or alpha). SVMs use
/// balanced class weights computed from `y`; CNB is unweighted.
pub fn train_classifier(
    kind: ModelKind,
    x: &[SparseVector],
    y: &[usize],
    classes: &[String],
    hyper: f64,
    seed: u64,
) -> Result<Classifier> {
    match kind {
        ModelKind::Svm => {
            let mut counts = vec![0usize; classes.len()];
            for &c in y {
                counts[c.min(classes.len() - 1)] += 1;
            }
            // Classes absent from this training split keep weight 1; they
            // never enter the box constraints anyway.
            let present: Vec<usize> = counts.iter().copied().filter(|&n| n > 0).collect();
            let balanced = ClassWeights::balanced(&present)?;
            let mut it = balanced.as_slice().iter();
            let full: Vec<f64> = counts
                .iter()
                .map(|&n| if n > 0 { *it.next().expect("one weight per present class") } else { 1.0 })
                .collect();
            let weights = ClassWeights::new(full)?;
            train_linear_svm(x, y, classes, hyper, &weights, seed).map(Classifier::Svm)
        }
        ModelKind::Cnb => train_cnb(x, y, classes, hyper).map(Classifier::Cnb),
    }
}

pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Validates a training set and returns its column count.
pub(crate) fn check_rows(x: &[SparseVector], y: &[usize], n_classes: usize) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::Training("empty training set".into()));
    }
    if x.len() != y.len() {
        return Err(Error::Training(format!("{} rows but {} labels", x.len(), y.len())));
    }
    if n_classes < 2 {
        return Err(Error::Training("need at least two classes".into()));
    }
    if let Some(&bad) = y.iter().find(|&&c| c >= n_classes) {
        return Err(Error::Training(format!("label index {bad} outside {n_classes} classes")));
    }
    let dim = x[0].dim();
    for (i, r) in x.iter().enumerate() {
        if r.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: r.dim(),
            });
        }
        if r.entries().iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::Training(format!("row {i} has a non-finite feature value")));
        }
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_first_on_ties() {
        assert_eq!(argmax(&[1.0, 1.0, 0.5]), 0);
        assert_eq!(argmax(&[0.0, 2.0, 2.0]), 1);
        assert_eq!(argmax(&[-0.0, 0.0]), 0);
    }

    #[test]
    fn doubling_weights_and_halving_c_is_identity() {
        let x: Vec<SparseVector> = (0..30)
            .map(|i| SparseVector::from_dense(&[(i as f64).sin(), ((i * 7) % 5) as f64 - 2.0]))
            .collect();
        let y: Vec<usize> = (0..30).map(|i| usize::from(i % 4 == 0)).collect();
        let cls = vec!["a".to_string(), "b".to_string()];
        let w = ClassWeights::from_labels(&y, 2).unwrap();
        let w2 = ClassWeights::new(w.as_slice().iter().map(|v| v * 2.0).collect()).unwrap();
        let m1 = train_linear_svm(&x, &y, &cls, 1.0, &w, 5).unwrap();
        let m2 = train_linear_svm(&x, &y, &cls, 0.5, &w2, 5).unwrap();
        for r in &x {
            assert_eq!(m1.predict(r).unwrap(), m2.predict(r).unwrap());
        }
    }

    #[test]
    fn cnb_ignores_zero_columns() {
        let x: Vec<SparseVector> = (0..8)
            .map(|i| SparseVector::from_dense(&[(i % 3) as f64, ((i + 1) % 2) as f64]))
            .collect();
        let y: Vec<usize> = (0..8).map(|i| i % 2).collect();
        let cls = vec!["a".to_string(), "b".to_string()];
        let m = train_cnb(&x, &y, &cls, 1.0).unwrap();
        let wide: Vec<SparseVector> = x.iter().map(|r| r.widened(1)).collect();
        let mw = train_cnb(&wide, &y, &cls, 1.0).unwrap();
        for (a, b) in x.iter().zip(&wide) {
            assert_eq!(m.predict(a).unwrap(), mw.predict(b).unwrap());
        }
    }
}
