//! Stratified folds, nested cross-validation, P/R/F1 reports, the majority
//! baseline and Cohen's kappa.

mod folds;
mod metrics;

pub use folds::{stratified_kfold, FoldPlan};
pub use metrics::{cohens_kappa, majority_baseline, prf_metrics, ClassMetrics, MetricsBlock};

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classifiers::{train_classifier, ModelKind};
use crate::error::{Error, Result};
use crate::features::{assemble_features, fit_features, Example, FeatureConfig, FeatureSet, FittedFeatures, NgramRange};
use crate::par::Execution;
use crate::task::Task;

pub const DEFAULT_GRID_C: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
pub const DEFAULT_GRID_ALPHA: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperGrid {
    pub c: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl Default for HyperGrid {
    fn default() -> Self {
        HyperGrid {
            c: DEFAULT_GRID_C.to_vec(),
            alpha: DEFAULT_GRID_ALPHA.to_vec(),
        }
    }
}

impl HyperGrid {
    pub fn new(mut c: Vec<f64>, mut alpha: Vec<f64>) -> Result<Self> {
        for (name, g) in [("C", &mut c), ("alpha", &mut alpha)] {
            if g.is_empty() || g.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::Config(format!("{name} grid must be non-empty and positive")));
            }
            g.sort_by(f64::total_cmp);
            g.dedup();
        }
        Ok(HyperGrid { c, alpha })
    }

    /// Candidates for `kind`, ascending.
    pub fn values(&self, kind: ModelKind) -> &[f64] {
        match kind {
            ModelKind::Svm => &self.c,
            ModelKind::Cnb => &self.alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvConfig {
    pub task: Task,
    pub model: ModelKind,
    pub features: FeatureConfig,
    pub grid: HyperGrid,
    pub outer_k: usize,
    pub inner_k: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl CvConfig {
    pub fn new(task: Task, model: ModelKind, features: FeatureConfig) -> Self {
        CvConfig {
            task,
            model,
            features,
            grid: HyperGrid::default(),
            outer_k: 5,
            inner_k: 3,
            seed: 42,
            exec: Execution::default(),
        }
    }
}

/// The examples admitted to a task with their class indices.
#[derive(Debug, Clone)]
pub struct TaskData<'a> {
    pub examples: Vec<&'a Example>,
    pub y: Vec<usize>,
    pub classes: Vec<String>,
}

/// Labeled examples for `task`. Component and standpoint admit only
/// argumentative quotes.
pub fn task_dataset(examples: &[Example], task: Task) -> TaskData<'_> {
    let classes = task.classes();
    let mut out = TaskData {
        examples: Vec::new(),
        y: Vec::new(),
        classes,
    };
    for e in examples {
        let Some(label) = e.labels.as_ref().and_then(|l| task.label(l)) else {
            continue;
        };
        let idx = out
            .classes
            .iter()
            .position(|c| c == label)
            .expect("task labels come from the task's class list");
        out.examples.push(e);
        out.y.push(idx);
    }
    out
}

/// Derives an independent stream seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn pick<'a, T: Copy>(items: &'a [T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| items[i]).collect()
}

/// Fits features on `train`, trains one model per hyperparameter and
/// predicts `test` with each.
fn fit_predict_many(
    cfg: &CvConfig,
    train: &[&Example],
    y_train: &[usize],
    test: &[&Example],
    classes: &[String],
    hypers: &[f64],
    seed: u64,
) -> Result<(FittedFeatures, Vec<Vec<usize>>)> {
    let fitted = fit_features(&cfg.features, train)?;
    let x_train = assemble_features(&fitted, train, Execution::Sequential)?;
    let x_test = assemble_features(&fitted, test, Execution::Sequential)?;
    let mut all = Vec::with_capacity(hypers.len());
    for &h in hypers {
        let model = train_classifier(cfg.model, &x_train.rows, y_train, classes, h, seed)?;
        let pred = x_test.rows.iter().map(|r| model.predict(r)).collect::<Result<Vec<_>>>()?;
        all.push(pred);
    }
    Ok((fitted, all))
}

fn macro_f1(gold: &[usize], pred: &[usize], classes: &[String]) -> Result<f64> {
    let g: Vec<&str> = gold.iter().map(|&i| classes[i].as_str()).collect();
    let p: Vec<&str> = pred.iter().map(|&i| classes[i].as_str()).collect();
    Ok(prf_metrics(&g, &p, classes)?.macro_f1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScore {
    pub value: f64,
    pub mean_macro_f1: f64,
}

/// Picks the grid value with the best mean macro F1 over `inner_k`
/// stratified folds of the given data; ties go to the smaller value.
pub fn tune_hyperparameter(
    cfg: &CvConfig,
    examples: &[&Example],
    y: &[usize],
    classes: &[String],
    seed: u64,
) -> Result<(f64, Vec<GridScore>)> {
    let grid = cfg.grid.values(cfg.model);
    if grid.len() == 1 {
        return Ok((grid[0], vec![GridScore { value: grid[0], mean_macro_f1: f64::NAN }]));
    }
    let plan = stratified_kfold(y, cfg.inner_k, seed)?;
    let fold_ids: Vec<usize> = (0..plan.k).collect();
    let per_fold: Vec<Vec<f64>> = cfg.exec.try_map(&fold_ids, |&f| {
        let tr = plan.train_indices(f);
        let te = &plan.folds[f];
        let (_, preds) = fit_predict_many(
            cfg,
            &pick(examples, &tr),
            &pick(y, &tr),
            &pick(examples, te),
            classes,
            grid,
            derive_seed(seed, f as u64),
        )?;
        let gold = pick(y, te);
        preds.iter().map(|p| macro_f1(&gold, p, classes)).collect::<Result<Vec<f64>>>()
    })?;
    let scores: Vec<GridScore> = grid
        .iter()
        .enumerate()
        .map(|(g, &value)| GridScore {
            value,
            mean_macro_f1: per_fold.iter().map(|s| s[g]).sum::<f64>() / per_fold.len() as f64,
        })
        .collect();
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if s.mean_macro_f1 > scores[best].mean_macro_f1 {
            best = i;
        }
    }
    Ok((scores[best].value, scores))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub hyperparameter: f64,
    pub inner_scores: Vec<GridScore>,
    pub macro_f1: f64,
    pub feature_fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: Task,
    pub model: ModelKind,
    pub hyperparameter_name: String,
    pub feature_sets: Vec<FeatureSet>,
    pub tfidf_range: NgramRange,
    pub pos_range: NgramRange,
    pub raw_counts: bool,
    pub seed: u64,
    pub outer_k: usize,
    pub inner_k: usize,
    pub classes: Vec<String>,
    /// Metrics over the pooled outer-fold predictions.
    pub pooled: MetricsBlock,
    pub fold_macro_f1_mean: f64,
    pub fold_macro_f1_sd: f64,
    pub folds: Vec<FoldResult>,
    pub baseline: MetricsBlock,
}

/// Nested stratified cross-validation.
///
/// For each outer fold, feature models are fitted and the hyperparameter is
/// tuned on the outer-training split only; the winner is refitted on that
/// split and scored on the held-out fold. Folds run through `cfg.exec` and
/// are merged in fold order.
pub fn nested_cv(examples: &[Example], cfg: &CvConfig) -> Result<EvalReport> {
    let data = task_dataset(examples, cfg.task);
    if data.examples.is_empty() {
        return Err(Error::InvalidInput(format!("no examples labeled for task {}", cfg.task)));
    }
    let plan = stratified_kfold(&data.y, cfg.outer_k, cfg.seed)?;
    let fold_ids: Vec<usize> = (0..plan.k).collect();

    let results: Vec<(FoldResult, Vec<(usize, usize)>)> = cfg.exec.try_map(&fold_ids, |&f| {
        let tr = plan.train_indices(f);
        let te = &plan.folds[f];
        let train = pick(&data.examples, &tr);
        let y_train = pick(&data.y, &tr);
        let test = pick(&data.examples, te);
        let (best, inner_scores) =
            tune_hyperparameter(cfg, &train, &y_train, &data.classes, derive_seed(cfg.seed, 1000 + f as u64))?;
        let (fitted, preds) = fit_predict_many(
            cfg,
            &train,
            &y_train,
            &test,
            &data.classes,
            &[best],
            derive_seed(cfg.seed, 2000 + f as u64),
        )?;
        let test_keys: BTreeSet<_> = test.iter().map(|e| e.key).collect();
        if let Some(k) = fitted.fitted_on.iter().find(|k| test_keys.contains(k)) {
            return Err(Error::Leakage(format!(
                "feature models of outer fold {f} were fitted on held-out quote {k}"
            )));
        }
        let gold = pick(&data.y, te);
        let pred = preds.into_iter().next().expect("one prediction vector");
        Ok((
            FoldResult {
                fold: f,
                train_size: tr.len(),
                test_size: te.len(),
                hyperparameter: best,
                inner_scores,
                macro_f1: macro_f1(&gold, &pred, &data.classes)?,
                feature_fingerprint: fitted.fingerprint(),
            },
            gold.into_iter().zip(pred).collect(),
        ))
    })?;

    let mut folds = Vec::with_capacity(results.len());
    let mut gold = Vec::new();
    let mut pred = Vec::new();
    for (fr, pairs) in results {
        for (g, p) in pairs {
            gold.push(data.classes[g].as_str());
            pred.push(data.classes[p].as_str());
        }
        folds.push(fr);
    }
    let pooled = prf_metrics(&gold, &pred, &data.classes)?;
    let baseline = majority_baseline(&gold, &data.classes)?;
    let f1s: Vec<f64> = folds.iter().map(|f| f.macro_f1).collect();
    let mean = f1s.iter().sum::<f64>() / f1s.len() as f64;
    let sd = if f1s.len() > 1 {
        (f1s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (f1s.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(EvalReport {
        task: cfg.task,
        model: cfg.model,
        hyperparameter_name: cfg.model.hyper_name().to_string(),
        feature_sets: cfg.features.sets.clone(),
        tfidf_range: cfg.features.tfidf_range,
        pos_range: cfg.features.pos_range,
        raw_counts: cfg.features.raw_counts,
        seed: cfg.seed,
        outer_k: cfg.outer_k,
        inner_k: cfg.inner_k,
        classes: data.classes.clone(),
        pooled,
        fold_macro_f1_mean: mean,
        fold_macro_f1_sd: sd,
        folds,
        baseline,
    })
}

impl EvalReport {
    /// Pretty JSON; field order is fixed by the struct definition.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned text table: one row per class, the macro average, then the
    /// baseline.
    pub fn to_table(&self) -> String {
        let width = self
            .classes
            .iter()
            .map(String::len)
            .chain(["Average/Total".len()])
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let sets: Vec<&str> = self.feature_sets.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(
            out,
            "task={} model={} features={} seed={} outer_k={} inner_k={}",
            self.task,
            self.model,
            sets.join(","),
            self.seed,
            self.outer_k,
            self.inner_k
        );
        let _ = writeln!(
            out,
            "{:<width$}  {:>9}  {:>9}  {:>9}  {:>7}",
            "Label", "Precision", "Recall", "F1", "Support"
        );
        for c in &self.pooled.per_class {
            let _ = writeln!(
                out,
                "{:<width$}  {:>9.4}  {:>9.4}  {:>9.4}  {:>7}",
                c.label, c.precision, c.recall, c.f1, c.support
            );
        }
        for (name, b) in [("Average/Total", &self.pooled), ("Baseline", &self.baseline)] {
            let _ = writeln!(
                out,
                "{:<width$}  {:>9.4}  {:>9.4}  {:>9.4}  {:>7}",
                name, b.macro_precision, b.macro_recall, b.macro_f1, b.support
            );
        }
        let _ = writeln!(
            out,
            "per-fold macro F1: {:.4} +/- {:.4}",
            self.fold_macro_f1_mean, self.fold_macro_f1_sd
        );
        let chosen: Vec<String> = self.folds.iter().map(|f| format!("{}", f.hyperparameter)).collect();
        let _ = writeln!(out, "chosen {} per fold: {}", self.hyperparameter_name, chosen.join(", "));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation_and_order() {
        let g = HyperGrid::new(vec![10.0, 0.1, 1.0, 1.0], vec![1.0]).unwrap();
        assert_eq!(g.values(ModelKind::Svm), &[0.1, 1.0, 10.0]);
        assert!(HyperGrid::new(vec![], vec![1.0]).is_err());
        assert!(HyperGrid::new(vec![1.0], vec![-1.0]).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let s: BTreeSet<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        assert_eq!(s.len(), 100);
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
    }
}
