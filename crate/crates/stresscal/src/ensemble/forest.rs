//! Forest training and prediction on top of the single-tree learner.
//!
//! Trees train in parallel, each on its own counter-derived RNG stream, and
//! importances reduce in fixed tree order afterwards — so results are
//! bit-identical whether the pool has one thread or many.

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{fit_tree_on, modal_class, DecisionTree, TreeTarget};
use super::EnsembleHyperparams;
use crate::dataio::{FeatureTable, TaskKind};
use crate::error::{Error, Result};
use crate::seeds;

/// A fitted forest plus everything needed to apply it: column names, the
/// label set (classification) or training target range (regression), and
/// the normalized MDI importance vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedEnsemble {
    hyperparams: EnsembleHyperparams,
    feature_names: Vec<String>,
    label_set: Vec<String>,
    target_range: Option<(f64, f64)>,
    trees: Vec<DecisionTree>,
    importances: Vec<f64>,
}

/// Train an ensemble on a feature table.
///
/// Tree `i` draws its bootstrap resample (when enabled) and all node
/// randomness from a stream seeded by `seed` and `i` only, so the result
/// does not depend on scheduling.
///
/// # Errors
/// * [`Error::EmptyInput`] on an empty table.
/// * [`Error::Parameter`] when the hyperparameter task disagrees with the
///   table or the hyperparameters are invalid.
pub fn fit_forest(table: &FeatureTable, hyper: &EnsembleHyperparams) -> Result<TrainedEnsemble> {
    hyper.validate()?;
    if table.n_rows() == 0 {
        return Err(Error::EmptyInput("training table".into()));
    }
    if hyper.task != table.task_kind() {
        return Err(Error::Parameter(format!(
            "hyperparameters are for {:?} but the table is {:?}",
            hyper.task,
            table.task_kind()
        )));
    }

    let x: Vec<Vec<f64>> = table.rows().iter().map(|r| r.features.clone()).collect();
    let n = x.len();
    let p = table.n_features();

    let class_labels;
    let value_targets;
    let target: TreeTarget<'_>;
    let mut label_set = Vec::new();
    let mut target_range = None;
    match hyper.task {
        TaskKind::Classification => {
            class_labels = table.label_indices()?;
            label_set = table.label_set().to_vec();
            let first = class_labels[0];
            if class_labels.iter().all(|&l| l == first) {
                warn!(
                    "training rows contain a single class ('{}'); the model is a constant predictor",
                    label_set[first]
                );
            }
            target = TreeTarget::Classes {
                labels: &class_labels,
                n_classes: label_set.len(),
            };
        }
        TaskKind::Regression => {
            value_targets = table.targets()?;
            let lo = value_targets.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = value_targets
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            target_range = Some((lo, hi));
            target = TreeTarget::Values(&value_targets);
        }
    }
    // Keep the borrowed targets alive for the parallel section.
    let target = &target;

    let fitted: Vec<(DecisionTree, Vec<f64>)> = (0..hyper.n_trees)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seeds::stream_seed(hyper.seed, i as u64));
            let idx: Vec<usize> = if hyper.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            fit_tree_on(&x, target, idx, hyper, &mut rng)
        })
        .collect();

    // Fixed-order reduction: normalize each tree's MDI, average, renormalize.
    let mut importances = vec![0.0; p];
    for (_, tree_importances) in &fitted {
        let total: f64 = tree_importances.iter().sum();
        if total > 0.0 {
            for (acc, v) in importances.iter_mut().zip(tree_importances) {
                *acc += v / total;
            }
        }
    }
    let total: f64 = importances.iter().sum();
    if total > 0.0 {
        for v in &mut importances {
            *v /= total;
        }
    } else {
        warn!("no tree found any informative split; importances are all zero");
    }

    Ok(TrainedEnsemble {
        hyperparams: *hyper,
        feature_names: table.feature_names().to_vec(),
        label_set,
        target_range,
        trees: fitted.into_iter().map(|(tree, _)| tree).collect(),
        importances,
    })
}

impl TrainedEnsemble {
    pub fn hyperparams(&self) -> &EnsembleHyperparams {
        &self.hyperparams
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Declared label set (empty for regression models).
    pub fn label_set(&self) -> &[String] {
        &self.label_set
    }

    /// Training target range (regression models only).
    pub fn target_range(&self) -> Option<(f64, f64)> {
        self.target_range
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Normalized mean-decrease-impurity vector (all zeros when no tree
    /// ever split).
    pub fn feature_importances(&self) -> &[f64] {
        &self.importances
    }

    fn check_input(&self, x: &[f64], task: TaskKind) -> Result<()> {
        if self.hyperparams.task != task {
            return Err(Error::Parameter(format!(
                "{:?} prediction from a {:?} model",
                task, self.hyperparams.task
            )));
        }
        if x.len() != self.feature_names.len() {
            return Err(Error::ShapeMismatch(format!(
                "input has {} features, model expects {}",
                x.len(),
                self.feature_names.len()
            )));
        }
        Ok(())
    }

    /// Majority vote of per-tree modal classes; ties go to the lowest label
    /// index in the declared order.
    ///
    /// # Errors
    /// [`Error::ShapeMismatch`] on input length mismatch; [`Error::Parameter`]
    /// on a regression model.
    pub fn predict_class_index(&self, x: &[f64]) -> Result<usize> {
        self.check_input(x, TaskKind::Classification)?;
        let mut votes = vec![0usize; self.label_set.len()];
        for tree in &self.trees {
            votes[tree.predict_class(x)] += 1;
        }
        Ok(modal_class(&votes))
    }

    /// [`Self::predict_class_index`] mapped through the label set.
    ///
    /// # Errors
    /// As for [`Self::predict_class_index`].
    pub fn predict_label(&self, x: &[f64]) -> Result<&str> {
        Ok(&self.label_set[self.predict_class_index(x)?])
    }

    /// Mean of per-tree leaf means, clamped to the training target range.
    ///
    /// # Errors
    /// [`Error::ShapeMismatch`] on input length mismatch; [`Error::Parameter`]
    /// on a classification model.
    pub fn predict_value(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x, TaskKind::Regression)?;
        let sum: f64 = self.trees.iter().map(|t| t.predict_value(x)).sum();
        let mean = sum / self.trees.len() as f64;
        let (lo, hi) = self
            .target_range
            .expect("regression model stores its range");
        Ok(mean.clamp(lo, hi))
    }

    /// Class indices for every row of `table` (parallel, order-preserving).
    ///
    /// # Errors
    /// [`Error::ShapeMismatch`] when the table columns differ from the
    /// model's feature names.
    pub fn predict_classes(&self, table: &FeatureTable) -> Result<Vec<usize>> {
        if table.feature_names() != self.feature_names.as_slice() {
            return Err(Error::ShapeMismatch(
                "table columns do not match the model's features".into(),
            ));
        }
        table
            .rows()
            .par_iter()
            .map(|r| self.predict_class_index(&r.features))
            .collect()
    }

    /// Regression predictions for every row of `table`.
    ///
    /// # Errors
    /// As for [`Self::predict_classes`].
    pub fn predict_values(&self, table: &FeatureTable) -> Result<Vec<f64>> {
        if table.feature_names() != self.feature_names.as_slice() {
            return Err(Error::ShapeMismatch(
                "table columns do not match the model's features".into(),
            ));
        }
        table
            .rows()
            .par_iter()
            .map(|r| self.predict_value(&r.features))
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn from_parts(
        hyperparams: EnsembleHyperparams,
        feature_names: Vec<String>,
        label_set: Vec<String>,
        target_range: Option<(f64, f64)>,
        trees: Vec<DecisionTree>,
        importances: Vec<f64>,
    ) -> Self {
        TrainedEnsemble {
            hyperparams,
            feature_names,
            label_set,
            target_range,
            trees,
            importances,
        }
    }
}
