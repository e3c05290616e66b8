use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted sparse vector. Indices are strictly increasing and below `dim`;
/// zeros are never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        SparseVector { dim, entries: Vec::new() }
    }

    /// Validating constructor: entries must already be sorted and in range.
    /// Explicit zeros are dropped.
    pub fn new(dim: usize, entries: Vec<(usize, f64)>) -> Result<Self> {
        let mut last: Option<usize> = None;
        for &(i, v) in &entries {
            if i >= dim {
                return Err(Error::InvalidInput(format!("index {i} out of range for dimension {dim}")));
            }
            if last.is_some_and(|l| l >= i) {
                return Err(Error::InvalidInput("sparse indices must be strictly increasing".into()));
            }
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite value at index {i}")));
            }
            last = Some(i);
        }
        Ok(SparseVector {
            dim,
            entries: entries.into_iter().filter(|&(_, v)| v != 0.0).collect(),
        })
    }

    /// Sums duplicate indices, sorts and drops zeros.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(usize, f64)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            debug_assert!(i < dim);
            match entries.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|&(_, v)| v != 0.0);
        SparseVector { dim, entries }
    }

    pub fn from_dense(values: &[f64]) -> Self {
        SparseVector {
            dim: values.len(),
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| (i, *v))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn sq_norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum()
    }

    /// Unit-L2 copy; the zero vector stays zero.
    pub fn l2_normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for e in &mut self.entries {
                e.1 /= n;
            }
        }
        self
    }

    /// Dot product with a dense vector of at least `dim` entries.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| v * dense[i]).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&(_, v)| v >= 0.0)
    }

    /// Horizontal concatenation.
    pub fn concat(parts: &[&SparseVector]) -> SparseVector {
        let mut offset = 0;
        let mut entries = Vec::with_capacity(parts.iter().map(|p| p.nnz()).sum());
        for p in parts {
            entries.extend(p.entries.iter().map(|&(i, v)| (i + offset, v)));
            offset += p.dim;
        }
        SparseVector { dim: offset, entries }
    }

    /// Appends `extra` trailing columns (all zero).
    pub fn widened(&self, extra: usize) -> SparseVector {
        SparseVector {
            dim: self.dim + extra,
            entries: self.entries.clone(),
        }
    }
}
