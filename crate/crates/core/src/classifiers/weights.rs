use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Balanced class weights `w_c = N / (K * N_c)`, indexed by class position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    weights: Vec<f64>,
}

impl ClassWeights {
    pub fn balanced(counts: &[usize]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidInput("no classes to weight".into()));
        }
        if let Some(c) = counts.iter().position(|&n| n == 0) {
            return Err(Error::InvalidInput(format!("class {c} has no samples; cannot weight an absent class")));
        }
        let n: usize = counts.iter().sum();
        let k = counts.len();
        Ok(ClassWeights {
            weights: counts.iter().map(|&nc| n as f64 / (k * nc) as f64).collect(),
        })
    }

    /// Weights from labels `y` over `k` classes.
    pub fn from_labels(y: &[usize], k: usize) -> Result<Self> {
        let mut counts = vec![0usize; k];
        for &c in y {
            counts[c] += 1;
        }
        Self::balanced(&counts)
    }

    pub fn uniform(k: usize) -> Self {
        ClassWeights { weights: vec![1.0; k] }
    }

    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput("class weights must be positive and finite".into()));
        }
        Ok(ClassWeights { weights })
    }

    pub fn get(&self, class: usize) -> f64 {
        self.weights[class]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Convenience for the named form: `[(label, count)]` -> `[(label, weight)]`.
pub fn compute_class_weights(counts: &[(&str, usize)]) -> Result<Vec<(String, f64)>> {
    let w = ClassWeights::balanced(&counts.iter().map(|c| c.1).collect::<Vec<_>>())?;
    Ok(counts
        .iter()
        .zip(w.as_slice())
        .map(|((l, _), &w)| (l.to_string(), w))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula() {
        let w = ClassWeights::balanced(&[75, 25]).unwrap();
        assert!((w.get(0) - 100.0 / 150.0).abs() < 1e-15);
        assert_eq!(w.get(1), 2.0);
        assert_eq!(ClassWeights::balanced(&[50, 50]).unwrap().as_slice(), &[1.0, 1.0]);
        let named = compute_class_weights(&[("arg", 608), ("non", 418)]).unwrap();
        assert!((named[0].1 - 1026.0 / 1216.0).abs() < 1e-15);
        assert!((named[1].1 - 1026.0 / 836.0).abs() < 1e-15);
    }

    #[test]
    fn absent_class_is_error() {
        assert!(ClassWeights::balanced(&[3, 0]).is_err());
        assert!(ClassWeights::from_labels(&[0, 0], 2).is_err());
    }
}
