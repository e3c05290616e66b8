//! Complement Naive Bayes.
//!
//! For class c, complement counts `N'_cj` sum feature j over samples of every
//! other class. Then
//!
//! ```text
//! theta'_cj = (alpha + N'_cj) / (alpha * m + sum_j N'_cj)
//! w_cj      = -ln theta'_cj / sum_j |ln theta'_cj|
//! ```
//!
//! and a row is assigned to `argmax_c sum_j x_j w_cj`.

use super::{argmax, check_rows};
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, PartialEq)]
pub struct CnbModel {
    pub classes: Vec<String>,
    pub dim: usize,
    pub alpha: f64,
    /// L1-normalized complement weights, one row per class.
    pub weights: Vec<Vec<f64>>,
    /// Stored for reference; prediction does not use them.
    pub log_priors: Vec<f64>,
}

pub fn train_cnb(x: &[SparseVector], y: &[usize], classes: &[String], alpha: f64) -> Result<CnbModel> {
    let dim = check_rows(x, y, classes.len())?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Training(format!("smoothing alpha must be positive, got {alpha}")));
    }
    if let Some(i) = x.iter().position(|r| !r.is_nonnegative()) {
        return Err(Error::Training(format!(
            "complement NB needs nonnegative features; row {i} has a negative value"
        )));
    }
    let k = classes.len();
    let mut class_counts = vec![vec![0.0; dim]; k];
    let mut class_sizes = vec![0usize; k];
    for (xi, &yi) in x.iter().zip(y) {
        class_sizes[yi] += 1;
        for &(j, v) in xi.entries() {
            class_counts[yi][j] += v;
        }
    }
    let m = dim as f64;
    let mut weights = Vec::with_capacity(k);
    for c in 0..k {
        let mut comp = vec![0.0; dim];
        for (other, counts) in class_counts.iter().enumerate() {
            if other == c {
                continue;
            }
            for (acc, v) in comp.iter_mut().zip(counts) {
                *acc += v;
            }
        }
        let total: f64 = comp.iter().sum();
        let denom = alpha * m + total;
        let raw: Vec<f64> = comp.iter().map(|n| -((alpha + n) / denom).ln()).collect();
        let norm: f64 = raw.iter().map(|v| v.abs()).sum();
        weights.push(if norm > 0.0 { raw.iter().map(|v| v / norm).collect() } else { raw });
    }
    let n = x.len() as f64;
    let log_priors = class_sizes
        .iter()
        .map(|&s| if s == 0 { f64::NEG_INFINITY } else { (s as f64 / n).ln() })
        .collect();
    Ok(CnbModel {
        classes: classes.to_vec(),
        dim,
        alpha,
        weights,
        log_priors,
    })
}

impl CnbModel {
    pub fn decision(&self, x: &SparseVector) -> Result<Vec<f64>> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.dim(),
            });
        }
        Ok(self.weights.iter().map(|w| x.dot(w)).collect())
    }

    pub fn predict(&self, x: &SparseVector) -> Result<usize> {
        Ok(argmax(&self.decision(x)?))
    }
}
