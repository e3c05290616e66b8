//! L2-regularized L1-hinge linear SVM trained by dual coordinate descent.
//!
//! Primal, with the bias folded in as a constant feature of value 1:
//!
//! ```text
//! P(w, b) = 1/2 (|w|^2 + b^2) + sum_i C_i max(0, 1 - y_i (w.x_i + b))
//! D(a)    = sum_i a_i - 1/2 |sum_i a_i y_i (x_i, 1)|^2,   0 <= a_i <= C_i
//! ```
//!
//! `C_i = C * w_{y_i}` carries the class weight. Each epoch visits samples
//! in a seeded random order; training stops once `(P - D) / P < tol`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::weights::ClassWeights;
use super::{argmax, check_rows};
use crate::error::{Error, Result};
use crate::features::SparseVector;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_EPOCHS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub epochs: usize,
    pub primal: f64,
    pub dual: f64,
    pub relative_gap: f64,
    pub converged: bool,
}

/// Solution of one binary subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySvm {
    pub w: Vec<f64>,
    pub b: f64,
    pub alpha: Vec<f64>,
    pub diagnostics: SolverDiagnostics,
}

/// Primal objective with the bias regularized as an ordinary weight.
pub fn primal_objective(x: &[SparseVector], y: &[f64], cost: &[f64], w: &[f64], b: f64) -> f64 {
    let reg = 0.5 * (w.iter().map(|v| v * v).sum::<f64>() + b * b);
    let loss: f64 = x
        .iter()
        .zip(y)
        .zip(cost)
        .map(|((xi, yi), ci)| ci * (1.0 - yi * (xi.dot(w) + b)).max(0.0))
        .sum();
    reg + loss
}

/// Dual objective given the dual variables and the weights they induce.
pub fn dual_objective(alpha: &[f64], w: &[f64], b: f64) -> f64 {
    alpha.iter().sum::<f64>() - 0.5 * (w.iter().map(|v| v * v).sum::<f64>() + b * b)
}

fn weights_from_alpha(x: &[SparseVector], y: &[f64], alpha: &[f64], dim: usize) -> (Vec<f64>, f64) {
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    for ((xi, yi), ai) in x.iter().zip(y).zip(alpha) {
        if *ai == 0.0 {
            continue;
        }
        for &(j, v) in xi.entries() {
            w[j] += ai * yi * v;
        }
        b += ai * yi;
    }
    (w, b)
}

fn relative_gap(primal: f64, dual: f64) -> f64 {
    if primal == 0.0 {
        0.0
    } else {
        (primal - dual) / primal.abs()
    }
}

/// Dual coordinate descent on one binary problem. `y` is +1/-1 and
/// `cost[i]` is the box bound of sample i.
pub fn solve_binary(
    x: &[SparseVector],
    y: &[f64],
    cost: &[f64],
    dim: usize,
    tol: f64,
    max_epochs: usize,
    seed: u64,
) -> BinarySvm {
    let n = x.len();
    let q: Vec<f64> = x.iter().map(|xi| xi.sq_norm() + 1.0).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diag = SolverDiagnostics {
        epochs: 0,
        primal: 0.0,
        dual: 0.0,
        relative_gap: f64::INFINITY,
        converged: false,
    };

    for epoch in 1..=max_epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let g = y[i] * (x[i].dot(&w) + b) - 1.0;
            let pg = if alpha[i] == 0.0 {
                g.min(0.0)
            } else if alpha[i] >= cost[i] {
                g.max(0.0)
            } else {
                g
            };
            if pg == 0.0 {
                continue;
            }
            let old = alpha[i];
            alpha[i] = (old - g / q[i]).clamp(0.0, cost[i]);
            let d = (alpha[i] - old) * y[i];
            if d != 0.0 {
                for &(j, v) in x[i].entries() {
                    w[j] += d * v;
                }
                b += d;
            }
        }
        let primal = primal_objective(x, y, cost, &w, b);
        let dual = dual_objective(&alpha, &w, b);
        diag = SolverDiagnostics {
            epochs: epoch,
            primal,
            dual,
            relative_gap: relative_gap(primal, dual),
            converged: false,
        };
        if diag.relative_gap < tol {
            diag.converged = true;
            break;
        }
    }

    // The running w drifts by rounding; rebuild it from the duals.
    let (w, b) = weights_from_alpha(x, y, &alpha, dim);
    diag.primal = primal_objective(x, y, cost, &w, b);
    diag.dual = dual_objective(&alpha, &w, b);
    diag.relative_gap = relative_gap(diag.primal, diag.dual);
    BinarySvm {
        w,
        b,
        alpha,
        diagnostics: diag,
    }
}

/// Binary problems store one vector for `classes[1]` (scores `[-s, s]`);
/// larger problems store one one-vs-rest vector per class.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub classes: Vec<String>,
    pub dim: usize,
    pub c: f64,
    pub seed: u64,
    pub class_weights: Vec<f64>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub diagnostics: Vec<SolverDiagnostics>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmOptions {
    pub tol: f64,
    pub max_epochs: usize,
}

impl Default for SvmOptions {
    fn default() -> Self {
        SvmOptions {
            tol: DEFAULT_TOL,
            max_epochs: DEFAULT_MAX_EPOCHS,
        }
    }
}

pub fn train_linear_svm(
    x: &[SparseVector],
    y: &[usize],
    classes: &[String],
    c: f64,
    weights: &ClassWeights,
    seed: u64,
) -> Result<LinearModel> {
    train_linear_svm_with(x, y, classes, c, weights, seed, SvmOptions::default())
}

pub fn train_linear_svm_with(
    x: &[SparseVector],
    y: &[usize],
    classes: &[String],
    c: f64,
    weights: &ClassWeights,
    seed: u64,
    opts: SvmOptions,
) -> Result<LinearModel> {
    let dim = check_rows(x, y, classes.len())?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Training(format!("cost C must be positive, got {c}")));
    }
    if weights.len() != classes.len() {
        return Err(Error::Training(format!(
            "{} class weights for {} classes",
            weights.len(),
            classes.len()
        )));
    }
    let mut present: Vec<usize> = y.to_vec();
    present.sort_unstable();
    present.dedup();
    if present.len() < 2 {
        return Err(Error::Training("training data contains a single class".into()));
    }
    let cost: Vec<f64> = y.iter().map(|&yi| c * weights.get(yi)).collect();
    let targets: Vec<usize> = if classes.len() == 2 { vec![1] } else { (0..classes.len()).collect() };
    let mut model = LinearModel {
        classes: classes.to_vec(),
        dim,
        c,
        seed,
        class_weights: weights.as_slice().to_vec(),
        weights: Vec::new(),
        biases: Vec::new(),
        diagnostics: Vec::new(),
    };
    for (k, &target) in targets.iter().enumerate() {
        let signs: Vec<f64> = y.iter().map(|&yi| if yi == target { 1.0 } else { -1.0 }).collect();
        let sol = solve_binary(x, &signs, &cost, dim, opts.tol, opts.max_epochs, seed.wrapping_add(k as u64));
        if !sol.diagnostics.converged {
            log::warn!(
                "SVM for class {} stopped after {} epochs with relative gap {:.3e}",
                classes[target],
                sol.diagnostics.epochs,
                sol.diagnostics.relative_gap
            );
        }
        model.weights.push(sol.w);
        model.biases.push(sol.b);
        model.diagnostics.push(sol.diagnostics);
    }
    Ok(model)
}

impl LinearModel {
    /// One score per class, in class order.
    pub fn decision(&self, x: &SparseVector) -> Result<Vec<f64>> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.dim(),
            });
        }
        let raw: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| x.dot(w) + b)
            .collect();
        Ok(if self.classes.len() == 2 { vec![-raw[0], raw[0]] } else { raw })
    }

    /// Index of the highest score; ties go to the earlier class.
    pub fn predict(&self, x: &SparseVector) -> Result<usize> {
        Ok(argmax(&self.decision(x)?))
    }

    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            for v in w {
                h.update(v.to_bits().to_le_bytes());
            }
            h.update(b.to_bits().to_le_bytes());
        }
        crate::features::hex_digest(&h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn symmetric_two_points() {
        let x = vec![SparseVector::from_dense(&[-1.0]), SparseVector::from_dense(&[1.0])];
        let m = train_linear_svm(&x, &[0, 1], &classes(&["neg", "pos"]), 10.0, &ClassWeights::uniform(2), 1).unwrap();
        assert!(m.biases[0].abs() < 1e-6);
        assert!((m.weights[0][0] - 1.0).abs() < 1e-9);
        assert_eq!(m.predict(&x[0]).unwrap(), 0);
        assert_eq!(m.predict(&x[1]).unwrap(), 1);
        assert!(m.diagnostics[0].converged);
    }

    #[test]
    fn zero_model_ties_to_first_class() {
        let m = LinearModel {
            classes: classes(&["a", "b", "c"]),
            dim: 2,
            c: 1.0,
            seed: 0,
            class_weights: vec![1.0; 3],
            weights: vec![vec![0.0; 2]; 3],
            biases: vec![0.5; 3],
            diagnostics: Vec::new(),
        };
        let x = SparseVector::from_dense(&[1.0, 2.0]);
        assert_eq!(m.decision(&x).unwrap(), vec![0.5; 3]);
        assert_eq!(m.predict(&x).unwrap(), 0);
        assert!(m.predict(&SparseVector::zeros(3)).is_err());
    }

    #[test]
    fn single_class_and_bad_values_rejected() {
        let x = vec![SparseVector::from_dense(&[1.0]), SparseVector::from_dense(&[2.0])];
        let cls = classes(&["a", "b"]);
        assert!(train_linear_svm(&x, &[0, 0], &cls, 1.0, &ClassWeights::uniform(2), 0).is_err());
        assert!(train_linear_svm(&x, &[0, 1], &cls, 0.0, &ClassWeights::uniform(2), 0).is_err());
    }

    #[test]
    fn gap_matches_independent_objectives() {
        let x: Vec<SparseVector> = (0..12)
            .map(|i| SparseVector::from_dense(&[(i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()]))
            .collect();
        let y: Vec<usize> = (0..12).map(|i| usize::from(i % 3 == 0)).collect();
        let m = train_linear_svm(&x, &y, &classes(&["a", "b"]), 1.0, &ClassWeights::from_labels(&y, 2).unwrap(), 3).unwrap();
        let d = m.diagnostics[0];
        assert!(d.converged);
        assert!(d.relative_gap < 1e-6);
    }

    #[test]
    fn deterministic_fingerprint() {
        let x: Vec<SparseVector> = (0..20).map(|i| SparseVector::from_dense(&[i as f64, (i % 4) as f64])).collect();
        let y: Vec<usize> = (0..20).map(|i| i % 3).collect();
        let cls = classes(&["a", "b", "c"]);
        let w = ClassWeights::from_labels(&y, 3).unwrap();
        let a = train_linear_svm(&x, &y, &cls, 0.5, &w, 9).unwrap();
        let b = train_linear_svm(&x, &y, &cls, 0.5, &w, 9).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.weights.len(), 3);
    }
}
