use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Per-class and macro-averaged precision, recall and F1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsBlock {
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub support: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_index(classes: &[String], label: &str) -> Result<usize> {
    classes
        .iter()
        .position(|c| c == label)
        .ok_or_else(|| Error::InvalidInput(format!("label {label:?} is not one of {classes:?}")))
}

/// Precision `TP/(TP+FP)`, recall `TP/(TP+FN)` and their harmonic mean per
/// class (0 for empty denominators); macro values are unweighted means.
pub fn prf_metrics<S: AsRef<str>>(gold: &[S], predicted: &[S], classes: &[String]) -> Result<MetricsBlock> {
    if gold.len() != predicted.len() {
        return Err(Error::InvalidInput(format!(
            "{} gold labels but {} predictions",
            gold.len(),
            predicted.len()
        )));
    }
    if classes.is_empty() {
        return Err(Error::InvalidInput("empty class list".into()));
    }
    let k = classes.len();
    let mut tp = vec![0usize; k];
    let mut gold_n = vec![0usize; k];
    let mut pred_n = vec![0usize; k];
    for (g, p) in gold.iter().zip(predicted) {
        let g = class_index(classes, g.as_ref())?;
        let p = class_index(classes, p.as_ref())?;
        gold_n[g] += 1;
        pred_n[p] += 1;
        if g == p {
            tp[g] += 1;
        }
    }
    let per_class: Vec<ClassMetrics> = (0..k)
        .map(|c| {
            let precision = ratio(tp[c], pred_n[c]);
            let recall = ratio(tp[c], gold_n[c]);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassMetrics {
                label: classes[c].clone(),
                precision,
                recall,
                f1,
                support: gold_n[c],
            }
        })
        .collect();
    let mean = |f: fn(&ClassMetrics) -> f64| per_class.iter().map(f).sum::<f64>() / k as f64;
    Ok(MetricsBlock {
        macro_precision: mean(|m| m.precision),
        macro_recall: mean(|m| m.recall),
        macro_f1: mean(|m| m.f1),
        support: gold.len(),
        per_class,
    })
}

/// Metrics of the constant predictor that always answers the most frequent
/// gold class (ties: earliest in `classes`).
pub fn majority_baseline<S: AsRef<str>>(gold: &[S], classes: &[String]) -> Result<MetricsBlock> {
    if gold.is_empty() {
        return Err(Error::InvalidInput("baseline of an empty label set".into()));
    }
    let mut counts = vec![0usize; classes.len()];
    for g in gold {
        counts[class_index(classes, g.as_ref())?] += 1;
    }
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    let predicted = vec![classes[best].as_str(); gold.len()];
    let gold: Vec<&str> = gold.iter().map(AsRef::as_ref).collect();
    prf_metrics(&gold, &predicted, classes)
}

/// Cohen's kappa `(p_o - p_e) / (1 - p_e)`; 1 when both raters agree
/// perfectly on a single label.
pub fn cohens_kappa<S: Ord>(a: &[S], b: &[S]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "rater sequences differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::InvalidInput("kappa needs at least one rated item".into()));
    }
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64;
    let mut marginals: BTreeMap<&S, (usize, usize)> = BTreeMap::new();
    for x in a {
        marginals.entry(x).or_default().0 += 1;
    }
    for y in b {
        marginals.entry(y).or_default().1 += 1;
    }
    let p_o = agree / n;
    let p_e: f64 = marginals
        .values()
        .map(|&(ca, cb)| (ca as f64 / n) * (cb as f64 / n))
        .sum();
    if p_e == 1.0 {
        return Ok(if p_o == 1.0 { 1.0 } else { 0.0 });
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cls(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn perfect_predictions() {
        let g = ["a", "b", "b", "c"];
        let m = prf_metrics(&g, &g, &cls(&["a", "b", "c"])).unwrap();
        assert_eq!((m.macro_precision, m.macro_recall, m.macro_f1), (1.0, 1.0, 1.0));
        assert_eq!(m.support, 4);
    }

    #[test]
    fn counted_confusion() {
        // A: TP=2, FP=1, FN=1.
        let g = ["A", "A", "A", "B", "B"];
        let p = ["A", "A", "B", "A", "B"];
        let m = prf_metrics(&g, &p, &cls(&["A", "B"])).unwrap();
        assert!((m.per_class[0].precision - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.per_class[0].recall - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_label_and_length() {
        assert!(prf_metrics(&["a"], &["z"], &cls(&["a"])).is_err());
        assert!(prf_metrics(&["a"], &[], &cls(&["a"])).is_err());
    }

    #[test]
    fn baseline_cases() {
        let balanced = ["a", "b"];
        let m = majority_baseline(&balanced, &cls(&["a", "b"])).unwrap();
        assert_eq!((m.macro_precision, m.macro_recall), (0.25, 0.5));
        assert!((m.macro_f1 - 1.0 / 3.0).abs() < 1e-15);
        let single = majority_baseline(&["x", "x"], &cls(&["x"])).unwrap();
        assert_eq!((single.macro_precision, single.macro_recall, single.macro_f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(cohens_kappa(&["A", "B", "A"], &["A", "B", "A"]).unwrap(), 1.0);
        assert_eq!(cohens_kappa(&["A", "A", "B", "B"], &["A", "B", "A", "B"]).unwrap(), 0.0);
        assert!((cohens_kappa(&["A", "A", "A", "B"], &["A", "A", "B", "B"]).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(cohens_kappa(&["A", "A"], &["A", "A"]).unwrap(), 1.0);
        assert!(cohens_kappa(&["A"], &["A", "B"]).is_err());
    }

    proptest! {
        #[test]
        fn closed_form_baseline(mut counts in prop::collection::vec(1usize..200, 1..6)) {
            // Make class 0 the strict majority.
            let max = *counts.iter().max().unwrap();
            counts[0] = max + 1;
            let k = counts.len();
            let names: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
            let gold: Vec<&str> = counts.iter().enumerate().flat_map(|(i, &n)| std::iter::repeat_n(names[i].as_str(), n)).collect();
            let m = majority_baseline(&gold, &names).unwrap();
            let p = counts[0] as f64 / gold.len() as f64;
            prop_assert!((m.macro_precision - p / k as f64).abs() < 1e-12);
            prop_assert!((m.macro_recall - 1.0 / k as f64).abs() < 1e-12);
            prop_assert!((m.macro_f1 - 2.0 * p / (1.0 + p) / k as f64).abs() < 1e-12);
        }

        #[test]
        fn macro_is_mean(pairs in prop::collection::vec((0usize..3, 0usize..3), 1..60)) {
            let names = cls(&["a", "b", "c"]);
            let g: Vec<&str> = pairs.iter().map(|p| names[p.0].as_str()).collect();
            let q: Vec<&str> = pairs.iter().map(|p| names[p.1].as_str()).collect();
            let m = prf_metrics(&g, &q, &names).unwrap();
            let mean_f1 = m.per_class.iter().map(|c| c.f1).sum::<f64>() / 3.0;
            prop_assert!((m.macro_f1 - mean_f1).abs() < 1e-12);
            prop_assert_eq!(m.per_class.iter().map(|c| c.support).sum::<usize>(), pairs.len());
        }
    }
}
