//! Versioned on-disk model artifact: the trained ensemble plus the
//! transform recipe that produced its training features. Loading an
//! artifact and replaying the recipe reproduces predictions bit for bit —
//! parameters are stored as JSON numbers, and `serde_json` round-trips
//! every finite `f64` exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ensemble::TrainedEnsemble;
use crate::error::{Error, Result};
use crate::transforms::TransformRecipe;

/// Current artifact format version; bump on breaking layout changes.
pub const FORMAT_VERSION: u32 = 1;

/// Everything needed to apply a trained model to new raw feature rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub format_version: u32,
    pub model: TrainedEnsemble,
    /// Recipe to replay on incoming tables before prediction; `None` when
    /// the model was trained on raw features.
    pub transform_recipe: Option<TransformRecipe>,
}

impl ModelArtifact {
    pub fn new(model: TrainedEnsemble, transform_recipe: Option<TransformRecipe>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            model,
            transform_recipe,
        }
    }
}

/// Write an artifact as pretty JSON.
///
/// # Errors
/// I/O and serialization errors.
pub fn save_model_artifact(path: &Path, artifact: &ModelArtifact) -> Result<()> {
    let mut encoded = serde_json::to_string_pretty(artifact)?;
    encoded.push('\n');
    fs::write(path, encoded)?;
    Ok(())
}

/// Read an artifact back.
///
/// # Errors
/// * [`Error::IncompatibleFormat`] when the file's version differs from
///   [`FORMAT_VERSION`].
/// * I/O and deserialization errors.
pub fn load_model_artifact(path: &Path) -> Result<ModelArtifact> {
    let raw = fs::read_to_string(path)?;
    let artifact: ModelArtifact = serde_json::from_str(&raw)?;
    if artifact.format_version != FORMAT_VERSION {
        return Err(Error::IncompatibleFormat {
            found: artifact.format_version,
            supported: FORMAT_VERSION,
        });
    }
    Ok(artifact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::{FeatureRow, FeatureTable, TaskKind};
    use crate::ensemble::{fit_forest, EnsembleHyperparams};
    use crate::transforms::{apply_transform_policy, DEFAULT_SKEW_THRESHOLD};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_table() -> FeatureTable {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows = (0..60)
            .map(|i| {
                let x = rng.gen_range(-1.0..1.0);
                FeatureRow {
                    subject_id: format!("s{}", i % 3),
                    label: Some(if x > 0.0 { "hi" } else { "lo" }.to_string()),
                    target: None,
                    features: vec![x, rng.gen_range(0.1..4.0f64).powi(3)],
                }
            })
            .collect();
        FeatureTable::new(vec!["a".into(), "b".into()], rows, TaskKind::Classification).unwrap()
    }

    #[test]
    fn artifact_round_trip_preserves_predictions_bit_for_bit() {
        let raw = sample_table();
        let (engineered, recipe) = apply_transform_policy(&raw, DEFAULT_SKEW_THRESHOLD).unwrap();
        let mut hyper = EnsembleHyperparams::extra_trees(TaskKind::Classification, 5);
        hyper.n_trees = 20;
        let model = fit_forest(&engineered, &hyper).unwrap();
        let before = model.predict_classes(&engineered).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let artifact = ModelArtifact::new(model, Some(recipe));
        save_model_artifact(&path, &artifact).unwrap();
        let loaded = load_model_artifact(&path).unwrap();
        assert_eq!(loaded, artifact);

        // Replay the stored recipe on the raw table, then predict.
        let replayed =
            crate::transforms::apply_recipe(&raw, loaded.transform_recipe.as_ref().unwrap())
                .unwrap();
        assert_eq!(loaded.model.predict_classes(&replayed).unwrap(), before);
    }

    #[test]
    fn version_mismatch_is_rejected_with_both_versions_named() {
        let raw = sample_table();
        let mut hyper = EnsembleHyperparams::random_forest(TaskKind::Classification, 1);
        hyper.n_trees = 3;
        let model = fit_forest(&raw, &hyper).unwrap();
        let mut artifact = ModelArtifact::new(model, None);
        artifact.format_version = 99;

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model_artifact(&path, &artifact).unwrap();
        let err = load_model_artifact(&path).unwrap_err();
        assert!(matches!(
            err,
            Error::IncompatibleFormat {
                found: 99,
                supported: 1
            }
        ));
        let message = err.to_string();
        assert!(message.contains("99") && message.contains('1'), "{message}");
    }

    #[test]
    fn malformed_artifact_files_error_cleanly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        std::fs::write(&path, "{ not json").unwrap();
        assert!(matches!(load_model_artifact(&path), Err(Error::Json(_))));
        assert!(load_model_artifact(&dir.path().join("missing.json")).is_err());
    }
}
