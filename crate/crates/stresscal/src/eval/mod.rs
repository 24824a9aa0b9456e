//! Evaluation protocols and reports: metrics, person-specific k-fold,
//! leave-one-subject-out, calibration sweeps, and the subject-id probe.

mod calibrate;
mod metrics;
mod protocol;
mod report;

pub use calibrate::{
    calibrate_model, calibration_sweep, CalibrationConfig, CalibrationCurve, CalibrationPoint,
};
pub use metrics::{aggregate_metrics, classification_metrics, regression_metrics, Metrics};
pub use protocol::{
    evaluate_model, kfold_person_specific, kfold_person_specific_all, loso_generic,
    subject_id_probe,
};

use serde::{Deserialize, Serialize};

use crate::ensemble::EnsembleHyperparams;

/// Metrics of one evaluation unit (a fold or a subject).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitMetrics {
    pub unit: String,
    pub n_test_rows: usize,
    pub metrics: Metrics,
}

/// Result of one evaluation protocol run: per-unit metrics plus their mean
/// and population standard deviation, with enough context (protocol, seed,
/// hyperparameters) to reproduce the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub protocol: String,
    /// What the units range over: a subject id for a single-subject run,
    /// `all_subjects` otherwise.
    pub scope: String,
    pub seed: u64,
    pub hyperparams: EnsembleHyperparams,
    pub units: Vec<UnitMetrics>,
    pub mean: Metrics,
    pub std: Metrics,
}

/// One feature in an importance ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    /// 1-based rank by descending importance.
    pub rank: usize,
    pub name: String,
    pub importance: f64,
}

/// Importance ranking of a table augmented with an integer-coded
/// `subject_id` column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub protocol: String,
    pub seed: u64,
    pub hyperparams: EnsembleHyperparams,
    /// 1-based rank the probe column attained.
    pub probe_rank: usize,
    pub ranking: Vec<RankedFeature>,
}
