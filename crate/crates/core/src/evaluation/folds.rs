use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition of sample indices into `k` folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// Sorted sample indices of each fold.
    pub folds: Vec<Vec<usize>>,
}

impl FoldPlan {
    /// Indices outside fold `f`, sorted.
    pub fn train_indices(&self, f: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != f)
            .flat_map(|(_, fold)| fold.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// Stratified k-fold assignment.
///
/// Classes are visited in sorted order. Each class's indices are shuffled
/// with one seeded generator and dealt round-robin starting where the
/// previous class stopped, so fold sizes differ by at most one and every
/// per-class fold count is within one of the exact proportion.
pub fn stratified_kfold<L: Ord + Clone + std::fmt::Debug>(labels: &[L], k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Config(format!("fold count must be at least 2, got {k}")));
    }
    let mut by_class: BTreeMap<L, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        by_class.entry(l.clone()).or_default().push(i);
    }
    if let Some((label, idx)) = by_class.iter().find(|(_, v)| v.len() < k) {
        return Err(Error::InvalidInput(format!(
            "class {label:?} has {} samples, fewer than {k} folds",
            idx.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut offset = 0;
    for (_, mut idx) in by_class {
        idx.shuffle(&mut rng);
        for (j, i) in idx.iter().enumerate() {
            folds[(offset + j) % k].push(*i);
        }
        offset = (offset + idx.len()) % k;
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(FoldPlan { k, seed, folds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn six_four_split() {
        let labels: Vec<char> = "AAAAAABBBB".chars().collect();
        // Five folds would leave one fold without a B.
        assert!(stratified_kfold(&labels, 5, 42).is_err());
        let plan = stratified_kfold(&labels, 4, 42).unwrap();
        for f in &plan.folds {
            let a = f.iter().filter(|&&i| labels[i] == 'A').count();
            assert!((1..=2).contains(&a));
            assert_eq!(f.len() - a, 1);
        }
        let sizes: Vec<usize> = plan.folds.iter().map(Vec::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 10);
        assert!(sizes.iter().all(|&s| s == 2 || s == 3));
        assert_eq!(plan, stratified_kfold(&labels, 4, 42).unwrap());
    }

    #[test]
    fn small_class_is_error() {
        let labels: Vec<char> = "AAAAAABBB".chars().collect();
        let err = stratified_kfold(&labels, 5, 0).unwrap_err().to_string();
        assert!(err.contains("'B'"), "{err}");
    }

    proptest! {
        #[test]
        fn partition_and_proportion(counts in prop::collection::vec(5usize..40, 1..5), k in 2usize..6, seed: u64) {
            let labels: Vec<usize> = counts.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n)).collect();
            let plan = stratified_kfold(&labels, k, seed).unwrap();
            let mut all: Vec<usize> = plan.folds.iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
            for (c, &n) in counts.iter().enumerate() {
                let exact = n as f64 / k as f64;
                for f in &plan.folds {
                    let got = f.iter().filter(|&&i| labels[i] == c).count() as f64;
                    prop_assert!((got - exact).abs() < 1.0);
                }
            }
            let sizes: Vec<usize> = plan.folds.iter().map(Vec::len).collect();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
    }
}
