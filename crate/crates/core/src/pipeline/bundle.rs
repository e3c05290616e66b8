use std::fs;
use std::path::Path;

use crate::classifiers::{load_model, save_model, train_classifier, Classifier};
use crate::error::{Error, Result};
use crate::evaluation::{task_dataset, tune_hyperparameter, CvConfig};
use crate::features::{assemble_features, fit_features, Example, FittedFeatures};
use crate::task::Task;

/// One classifier with the feature models it was trained against.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedLayer {
    pub task: Task,
    pub features: FittedFeatures,
    pub model: Classifier,
    /// Fingerprint of `features` recorded at training time.
    pub feature_fingerprint: String,
}

impl TrainedLayer {
    pub fn check(&self) -> Result<()> {
        let actual = self.features.fingerprint();
        if actual != self.feature_fingerprint {
            return Err(Error::Config(format!(
                "{} model was trained against feature models {} but {} were supplied",
                self.task, self.feature_fingerprint, actual
            )));
        }
        if self.model.dim() != self.features.dim() {
            return Err(Error::Config(format!(
                "{} model expects {} columns, feature models produce {}",
                self.task,
                self.model.dim(),
                self.features.dim()
            )));
        }
        if self.model.classes() != self.task.classes().as_slice() {
            return Err(Error::Config(format!(
                "{} model has classes {:?}",
                self.task,
                self.model.classes()
            )));
        }
        Ok(())
    }

    pub fn predict_label(&self, ex: &Example) -> Result<&str> {
        self.model.predict_label(&self.features.transform(ex))
    }
}

/// Fits features on every example admitted to `cfg.task` and trains the
/// model. Without an explicit hyperparameter the grid is searched by
/// stratified CV with `cfg.inner_k` folds.
pub fn train_layer(examples: &[Example], cfg: &CvConfig, hyper: Option<f64>) -> Result<TrainedLayer> {
    let data = task_dataset(examples, cfg.task);
    if data.examples.is_empty() {
        return Err(Error::InvalidInput(format!("no examples labeled for task {}", cfg.task)));
    }
    let hyper = match hyper {
        Some(h) => h,
        None => tune_hyperparameter(cfg, &data.examples, &data.y, &data.classes, cfg.seed)?.0,
    };
    let features = fit_features(&cfg.features, &data.examples)?;
    let x = assemble_features(&features, &data.examples, cfg.exec)?;
    let model = train_classifier(cfg.model, &x.rows, &data.y, &data.classes, hyper, cfg.seed)?;
    let feature_fingerprint = features.fingerprint();
    log::info!(
        "trained {} {} on {} examples ({}={hyper}, {} columns)",
        cfg.task,
        cfg.model,
        data.examples.len(),
        cfg.model.hyper_name(),
        x.dim
    );
    Ok(TrainedLayer {
        task: cfg.task,
        features,
        model,
        feature_fingerprint,
    })
}

/// The three layers used by two-layer inference.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBundle {
    pub level1: TrainedLayer,
    pub component: TrainedLayer,
    pub standpoint: TrainedLayer,
}

impl ModelBundle {
    pub fn layers(&self) -> [&TrainedLayer; 3] {
        [&self.level1, &self.component, &self.standpoint]
    }

    pub fn check(&self) -> Result<()> {
        for (layer, task) in self.layers().into_iter().zip(Task::ALL) {
            if layer.task != task {
                return Err(Error::Config(format!("expected a {task} layer, found {}", layer.task)));
            }
            layer.check()?;
        }
        Ok(())
    }

    /// Writes `<task>.features.json` and `<task>.model` per layer.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for layer in self.layers() {
            let features = serde_json::to_string(&layer.features)?;
            fs::write(dir.join(format!("{}.features.json", layer.task)), features)?;
            fs::write(
                dir.join(format!("{}.model", layer.task)),
                save_model(&layer.model, Some(&layer.feature_fingerprint)),
            )?;
        }
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let load = |task: Task| -> Result<TrainedLayer> {
            let features: FittedFeatures =
                serde_json::from_str(&fs::read_to_string(dir.join(format!("{task}.features.json")))?)?;
            let (model, fp) = load_model(&fs::read_to_string(dir.join(format!("{task}.model")))?)?;
            let feature_fingerprint = fp.ok_or_else(|| {
                Error::Config(format!("{task} model file does not record a feature fingerprint"))
            })?;
            let layer = TrainedLayer {
                task,
                features,
                model,
                feature_fingerprint,
            };
            layer.check()?;
            Ok(layer)
        };
        Ok(ModelBundle {
            level1: load(Task::Level1)?,
            component: load(Task::Component)?,
            standpoint: load(Task::Standpoint)?,
        })
    }
}
