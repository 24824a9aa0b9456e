//! Model calibration: mix a few samples of otherwise-unseen subjects into
//! the generic training pool, and sweep the per-subject calibration sample
//! count to trace how quickly personalization pays off.

use std::collections::BTreeSet;

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::metrics::{aggregate_metrics, Metrics};
use super::protocol::evaluate_model;
use super::UnitMetrics;
use crate::dataio::FeatureTable;
use crate::ensemble::{fit_forest, EnsembleHyperparams, TrainedEnsemble};
use crate::error::{Error, Result};
use crate::seeds;

/// Sweep configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    /// Number of held-out subjects excluded from the generic pool.
    pub q: usize,
    /// Calibration sample counts per held-out subject, strictly ascending.
    pub sizes: Vec<usize>,
    /// Fraction of each held-out subject's rows that forms the calibration
    /// pool; the rest is the untouched test half.
    pub calibration_fraction: f64,
    /// Seed for subject selection, half-splits, and sample draws.
    pub seed: u64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            q: 4,
            sizes: vec![0, 1, 2, 5, 10, 20, 50, 100],
            calibration_fraction: 0.5,
            seed: 0,
        }
    }
}

impl CalibrationConfig {
    /// # Errors
    /// * [`Error::Protocol`] when `q` does not leave at least one generic
    ///   subject.
    /// * [`Error::Parameter`] for empty or non-ascending sizes, or a
    ///   fraction outside (0, 1).
    pub fn validate(&self, n_subjects: usize) -> Result<()> {
        if self.q == 0 || self.q >= n_subjects {
            return Err(Error::Protocol(format!(
                "q = {} must be in [1, {}] with {} subjects",
                self.q,
                n_subjects.saturating_sub(1),
                n_subjects
            )));
        }
        if self.sizes.is_empty() {
            return Err(Error::Parameter("sizes must not be empty".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!(
                "sizes must be strictly ascending, got {:?}",
                self.sizes
            )));
        }
        if !(self.calibration_fraction.is_finite()
            && self.calibration_fraction > 0.0
            && self.calibration_fraction < 1.0)
        {
            return Err(Error::Parameter(format!(
                "calibration fraction must lie in (0, 1), got {}",
                self.calibration_fraction
            )));
        }
        Ok(())
    }
}

/// One sweep entry: metrics per held-out subject at a calibration size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    /// Requested samples per held-out subject.
    pub size: usize,
    /// Total calibration rows actually drawn (smaller when pools clip).
    pub n_calibration_rows: usize,
    pub units: Vec<UnitMetrics>,
    pub mean: Metrics,
    pub std: Metrics,
}

/// Full sweep result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationCurve {
    pub protocol: String,
    pub seed: u64,
    pub q: usize,
    pub calibration_fraction: f64,
    pub hyperparams: EnsembleHyperparams,
    pub held_out_subjects: Vec<String>,
    pub points: Vec<CalibrationPoint>,
}

/// Train on the seeded shuffle of `generic` ∪ `calibration`. The pools must
/// come from disjoint subject sets — mixing rows of a subject that is also
/// in the generic pool would fake personalization.
///
/// With an empty calibration table this reduces to a fit on the generic
/// pool alone.
///
/// # Errors
/// * [`Error::EmptyInput`] on an empty generic pool.
/// * [`Error::Contamination`] when a subject appears in both pools.
/// * [`Error::ShapeMismatch`] when the tables disagree structurally.
pub fn calibrate_model(
    generic: &FeatureTable,
    calibration: &FeatureTable,
    hyper: &EnsembleHyperparams,
) -> Result<TrainedEnsemble> {
    if generic.n_rows() == 0 {
        return Err(Error::EmptyInput("generic training pool".into()));
    }
    let generic_subjects: BTreeSet<String> = generic.subjects().into_iter().collect();
    let overlap: Vec<String> = calibration
        .subjects()
        .into_iter()
        .filter(|s| generic_subjects.contains(s))
        .collect();
    if !overlap.is_empty() {
        return Err(Error::Contamination(format!(
            "subjects {overlap:?} appear in both the generic and calibration pools"
        )));
    }
    let union = if calibration.n_rows() == 0 {
        generic.clone()
    } else {
        generic.concat(calibration)?
    };
    let mut order: Vec<usize> = (0..union.n_rows()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::stage_seed(hyper.seed, "calibration_mix"));
    order.shuffle(&mut rng);
    fit_forest(&union.subset(&order)?, hyper)
}

/// Run the calibration sweep:
///
/// 1. hold out `q` seeded-random subjects;
/// 2. split each held-out subject's rows into a calibration pool and a test
///    half (seeded, row-random);
/// 3. for every configured size `s`, draw `s` pool rows per held-out
///    subject (without replacement, clipped with a warning), train via
///    [`calibrate_model`], and score each held-out subject's untouched test
///    half.
///
/// # Errors
/// Configuration errors per [`CalibrationConfig::validate`]; training and
/// prediction errors propagate.
pub fn calibration_sweep(
    table: &FeatureTable,
    config: &CalibrationConfig,
    hyper: &EnsembleHyperparams,
) -> Result<CalibrationCurve> {
    let subjects = table.subjects();
    config.validate(subjects.len())?;

    let mut selection = subjects.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::stage_seed(config.seed, "held_out_selection"));
    selection.shuffle(&mut rng);
    let mut held_out: Vec<String> = selection.into_iter().take(config.q).collect();
    held_out.sort();

    let held: BTreeSet<&str> = held_out.iter().map(String::as_str).collect();
    let generic_idx: Vec<usize> = (0..table.n_rows())
        .filter(|&i| !held.contains(table.rows()[i].subject_id.as_str()))
        .collect();
    let generic = table.subset(&generic_idx)?;

    // Per-subject pool/test halves.
    let mut pools: Vec<(String, Vec<usize>, Vec<usize>)> = Vec::with_capacity(held_out.len());
    for subject in &held_out {
        let mut idx = table.rows_of_subject(subject);
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::stage_seed(
            config.seed,
            &format!("half_split:{subject}"),
        ));
        idx.shuffle(&mut rng);
        let n_pool = (idx.len() as f64 * config.calibration_fraction).floor() as usize;
        let pool = idx[..n_pool].to_vec();
        let mut test = idx[n_pool..].to_vec();
        test.sort_unstable();
        if test.is_empty() {
            return Err(Error::Protocol(format!(
                "subject '{subject}' has no test rows left after the calibration split"
            )));
        }
        pools.push((subject.clone(), pool, test));
    }

    let mut points = Vec::with_capacity(config.sizes.len());
    for &size in &config.sizes {
        let mut calibration_idx = Vec::new();
        for (subject, pool, test) in &pools {
            let drawn = if size >= pool.len() {
                if size > pool.len() {
                    warn!(
                        "size {size} exceeds subject '{subject}' pool of {}; clipping",
                        pool.len()
                    );
                }
                pool.clone()
            } else {
                let mut shuffled = pool.clone();
                let mut rng = ChaCha8Rng::seed_from_u64(seeds::stage_seed(
                    config.seed,
                    &format!("draw:{size}:{subject}"),
                ));
                shuffled.shuffle(&mut rng);
                shuffled.truncate(size);
                shuffled
            };
            // Audit: calibration rows must never touch the test half.
            if drawn.iter().any(|i| test.binary_search(i).is_ok()) {
                return Err(Error::Contamination(format!(
                    "internal error: a calibration row of '{subject}' is also a test row"
                )));
            }
            calibration_idx.extend(drawn);
        }
        let calibration = table.subset(&calibration_idx)?;
        let model = calibrate_model(&generic, &calibration, hyper)?;
        let mut units = Vec::with_capacity(pools.len());
        for (subject, _, test_idx) in &pools {
            let test = table.subset(test_idx)?;
            units.push(UnitMetrics {
                unit: subject.clone(),
                n_test_rows: test.n_rows(),
                metrics: evaluate_model(&model, &test)?,
            });
        }
        let metrics: Vec<Metrics> = units.iter().map(|u| u.metrics).collect();
        let (mean, std) = aggregate_metrics(&metrics)?;
        points.push(CalibrationPoint {
            size,
            n_calibration_rows: calibration_idx.len(),
            units,
            mean,
            std,
        });
    }

    Ok(CalibrationCurve {
        protocol: "calibration_sweep".to_string(),
        seed: config.seed,
        q: config.q,
        calibration_fraction: config.calibration_fraction,
        hyperparams: *hyper,
        held_out_subjects: held_out,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::{FeatureRow, TaskKind};
    use rand::Rng;

    /// Subjects occupy disjoint regions of f0 (personal baseline shifts);
    /// within a subject the classes are separable around the baseline.
    fn shifted_table(n_subjects: usize, n_per_subject: usize, seed: u64) -> FeatureTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        for s in 0..n_subjects {
            let offset = 2.0 * s as f64;
            for i in 0..n_per_subject {
                let stressed = i % 2 == 0;
                let center = if stressed { 0.5 } else { -0.5 };
                rows.push(FeatureRow {
                    subject_id: format!("s{s}"),
                    label: Some(if stressed { "stress" } else { "calm" }.to_string()),
                    target: None,
                    features: vec![
                        offset + center + rng.gen_range(-0.2..0.2),
                        rng.gen_range(-1.0..1.0),
                    ],
                });
            }
        }
        FeatureTable::new(
            vec!["f0".into(), "f1".into()],
            rows,
            TaskKind::Classification,
        )
        .unwrap()
    }

    fn et_hyper(seed: u64, n_trees: usize) -> EnsembleHyperparams {
        let mut h = EnsembleHyperparams::extra_trees(TaskKind::Classification, seed);
        h.n_trees = n_trees;
        h.max_depth = 8;
        h
    }

    #[test]
    fn config_validation_catches_bad_setups() {
        let mut config = CalibrationConfig::default();
        assert!(config.validate(25).is_ok());
        assert!(config.validate(4).is_err(), "q must leave a generic pool");
        config.q = 0;
        assert!(config.validate(10).is_err());
        config.q = 2;
        config.sizes = vec![0, 5, 5];
        assert!(config.validate(10).is_err(), "sizes must strictly ascend");
        config.sizes = vec![0, 5];
        config.calibration_fraction = 1.0;
        assert!(config.validate(10).is_err());
    }

    #[test]
    fn contaminated_pools_are_rejected() {
        let table = shifted_table(3, 20, 1);
        let a = table.subset(&table.rows_of_subject("s0")).unwrap();
        let mut both = table.rows_of_subject("s0");
        both.extend(table.rows_of_subject("s1"));
        let b = table.subset(&both).unwrap();
        let err = calibrate_model(&a, &b, &et_hyper(0, 5)).unwrap_err();
        assert!(matches!(err, Error::Contamination(_)));
        assert!(err.to_string().contains("s0"));
    }

    #[test]
    fn empty_calibration_set_reproduces_the_generic_model_exactly() {
        // Extremely Randomized Trees on the full sample are row-order
        // invariant for classification, so the mixed (shuffled) fit with an
        // empty calibration pool must equal a plain fit bit for bit.
        let table = shifted_table(3, 24, 5);
        let generic_idx: Vec<usize> = (0..table.n_rows())
            .filter(|&i| table.rows()[i].subject_id != "s2")
            .collect();
        let generic = table.subset(&generic_idx).unwrap();
        let empty = table.subset(&[]).unwrap();
        let hyper = et_hyper(11, 30);
        let calibrated = calibrate_model(&generic, &empty, &hyper).unwrap();
        let plain = fit_forest(&generic, &hyper).unwrap();
        assert_eq!(calibrated, plain);
        let probe = table.subset(&table.rows_of_subject("s2")).unwrap();
        assert_eq!(
            calibrated.predict_classes(&probe).unwrap(),
            plain.predict_classes(&probe).unwrap()
        );
    }

    #[test]
    fn sweep_reports_one_point_per_size_and_stays_disjoint() {
        let table = shifted_table(3, 30, 7);
        let config = CalibrationConfig {
            q: 1,
            sizes: vec![0, 4, 1000],
            calibration_fraction: 0.5,
            seed: 3,
        };
        let curve = calibration_sweep(&table, &config, &et_hyper(2, 20)).unwrap();
        assert_eq!(curve.points.len(), 3);
        assert_eq!(curve.held_out_subjects.len(), 1);
        assert_eq!(curve.points[0].n_calibration_rows, 0);
        assert_eq!(curve.points[1].n_calibration_rows, 4);
        // Pool is 15 rows per subject; the 1000 request clips to the pool.
        assert_eq!(curve.points[2].size, 1000);
        assert_eq!(curve.points[2].n_calibration_rows, 15);
        for point in &curve.points {
            assert_eq!(point.units.len(), 1);
            assert_eq!(point.units[0].n_test_rows, 15);
        }
    }

    #[test]
    fn zero_size_point_equals_the_generic_baseline() {
        let table = shifted_table(4, 24, 9);
        let config = CalibrationConfig {
            q: 2,
            sizes: vec![0, 3],
            calibration_fraction: 0.5,
            seed: 21,
        };
        let hyper = et_hyper(6, 25);
        let curve = calibration_sweep(&table, &config, &hyper).unwrap();

        // Rebuild the generic baseline by hand and score the same halves.
        let held: BTreeSet<&str> = curve.held_out_subjects.iter().map(String::as_str).collect();
        let generic_idx: Vec<usize> = (0..table.n_rows())
            .filter(|&i| !held.contains(table.rows()[i].subject_id.as_str()))
            .collect();
        let baseline = fit_forest(&table.subset(&generic_idx).unwrap(), &hyper).unwrap();
        for unit in &curve.points[0].units {
            let mut idx = table.rows_of_subject(&unit.unit);
            let mut rng = ChaCha8Rng::seed_from_u64(seeds::stage_seed(
                config.seed,
                &format!("half_split:{}", unit.unit),
            ));
            idx.shuffle(&mut rng);
            let n_pool = idx.len() / 2;
            let mut test_idx = idx[n_pool..].to_vec();
            test_idx.sort_unstable();
            let test = table.subset(&test_idx).unwrap();
            let expected = evaluate_model(&baseline, &test).unwrap();
            assert_eq!(unit.metrics, expected);
        }
    }

    #[test]
    fn calibration_samples_lift_accuracy_on_shifted_subjects() {
        let table = shifted_table(3, 44, 13);
        let config = CalibrationConfig {
            q: 1,
            sizes: vec![0, 16],
            calibration_fraction: 0.5,
            seed: 17,
        };
        let curve = calibration_sweep(&table, &config, &et_hyper(4, 80)).unwrap();
        let at_zero = curve.points[0].mean.primary();
        let calibrated = curve.points[1].mean.primary();
        assert!(
            calibrated > at_zero + 0.15,
            "calibration should lift accuracy: {at_zero} -> {calibrated}"
        );
    }

    #[test]
    fn sweeps_are_reproducible() {
        let table = shifted_table(3, 20, 19);
        let config = CalibrationConfig {
            q: 1,
            sizes: vec![0, 5],
            calibration_fraction: 0.5,
            seed: 23,
        };
        let a = calibration_sweep(&table, &config, &et_hyper(8, 15)).unwrap();
        let b = calibration_sweep(&table, &config, &et_hyper(8, 15)).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
