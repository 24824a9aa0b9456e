//! Evaluation protocols: person-specific k-fold cross-validation,
//! leave-one-subject-out (LOSO) generic evaluation, and the subject-id
//! importance probe.

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::metrics::{aggregate_metrics, classification_metrics, regression_metrics, Metrics};
use super::{EvaluationReport, ProbeReport, RankedFeature, UnitMetrics};
use crate::dataio::{FeatureRow, FeatureTable, TaskKind};
use crate::ensemble::{fit_forest, EnsembleHyperparams, TrainedEnsemble};
use crate::error::{Error, Result};
use crate::seeds;

/// Metrics of `model` on every row of `test`, with the metric family chosen
/// by the model's task.
///
/// # Errors
/// Propagates prediction errors; [`Error::ShapeMismatch`] when the table
/// does not match the model.
pub fn evaluate_model(model: &TrainedEnsemble, test: &FeatureTable) -> Result<Metrics> {
    match model.hyperparams().task {
        TaskKind::Classification => {
            let truth = test.label_indices()?;
            let predicted = model.predict_classes(test)?;
            classification_metrics(&truth, &predicted, test.label_set().len())
        }
        TaskKind::Regression => {
            let truth = test.targets()?;
            let predicted = model.predict_values(test)?;
            regression_metrics(&truth, &predicted)
        }
    }
}

fn build_report(
    protocol: &str,
    scope: &str,
    seed: u64,
    hyper: &EnsembleHyperparams,
    units: Vec<UnitMetrics>,
) -> Result<EvaluationReport> {
    let metrics: Vec<Metrics> = units.iter().map(|u| u.metrics).collect();
    let (mean, std) = aggregate_metrics(&metrics)?;
    Ok(EvaluationReport {
        protocol: protocol.to_string(),
        scope: scope.to_string(),
        seed,
        hyperparams: *hyper,
        units,
        mean,
        std,
    })
}

/// Shuffle `indices` with a seed derived from `seed` and `tag`, then cut
/// them into `k` near-equal folds (the first `n mod k` folds get the extra
/// row). Returns `(train, test)` index pairs, both ascending.
pub(crate) fn kfold_splits(
    indices: &[usize],
    k: usize,
    seed: u64,
    tag: &str,
) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut shuffled = indices.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::stage_seed(seed, tag));
    shuffled.shuffle(&mut rng);
    let n = shuffled.len();
    let base = n / k;
    let extra = n % k;
    let mut splits = Vec::with_capacity(k);
    let mut start = 0;
    for fold in 0..k {
        let len = base + usize::from(fold < extra);
        let mut test: Vec<usize> = shuffled[start..start + len].to_vec();
        let mut train: Vec<usize> = shuffled[..start]
            .iter()
            .chain(&shuffled[start + len..])
            .copied()
            .collect();
        test.sort_unstable();
        train.sort_unstable();
        splits.push((train, test));
        start += len;
    }
    splits
}

/// Person-specific k-fold cross-validation: only the rows of `subject_id`
/// participate, shuffled with a seed derived from the hyperparameter seed,
/// and one model is trained and tested per fold.
///
/// # Errors
/// * [`Error::Parameter`] for `k < 2`.
/// * [`Error::Protocol`] for an unknown subject or one with fewer than `k`
///   rows.
pub fn kfold_person_specific(
    table: &FeatureTable,
    subject_id: &str,
    k: usize,
    hyper: &EnsembleHyperparams,
) -> Result<EvaluationReport> {
    if k < 2 {
        return Err(Error::Parameter(format!("k must be at least 2, got {k}")));
    }
    let indices = table.rows_of_subject(subject_id);
    if indices.is_empty() {
        return Err(Error::Protocol(format!(
            "no rows for subject '{subject_id}'"
        )));
    }
    if indices.len() < k {
        return Err(Error::Protocol(format!(
            "subject '{subject_id}' has {} rows, fewer than k = {k}",
            indices.len()
        )));
    }
    let splits = kfold_splits(&indices, k, hyper.seed, &format!("kfold:{subject_id}"));
    let mut units = Vec::with_capacity(k);
    for (fold, (train_idx, test_idx)) in splits.iter().enumerate() {
        let model = fit_forest(&table.subset(train_idx)?, hyper)?;
        let test = table.subset(test_idx)?;
        units.push(UnitMetrics {
            unit: format!("fold_{fold}"),
            n_test_rows: test.n_rows(),
            metrics: evaluate_model(&model, &test)?,
        });
    }
    build_report(
        "person_specific_kfold",
        subject_id,
        hyper.seed,
        hyper,
        units,
    )
}

/// Run [`kfold_person_specific`] for every subject and aggregate the
/// per-subject mean metrics. Subjects with fewer than `k` rows are skipped
/// with a warning.
///
/// # Errors
/// [`Error::Protocol`] when no subject has enough rows.
pub fn kfold_person_specific_all(
    table: &FeatureTable,
    k: usize,
    hyper: &EnsembleHyperparams,
) -> Result<EvaluationReport> {
    let mut units = Vec::new();
    for subject in table.subjects() {
        let n_rows = table.rows_of_subject(&subject).len();
        if n_rows < k {
            warn!("skipping subject '{subject}': {n_rows} rows, fewer than k = {k}");
            continue;
        }
        let report = kfold_person_specific(table, &subject, k, hyper)?;
        units.push(UnitMetrics {
            unit: subject,
            n_test_rows: n_rows,
            metrics: report.mean,
        });
    }
    if units.is_empty() {
        return Err(Error::Protocol(format!(
            "no subject has at least k = {k} rows"
        )));
    }
    build_report(
        "person_specific_kfold_mean",
        "all_subjects",
        hyper.seed,
        hyper,
        units,
    )
}

/// Leave-one-subject-out: for every subject, train on all other subjects'
/// rows and test on that subject's rows.
///
/// # Errors
/// [`Error::Protocol`] with fewer than two subjects.
pub fn loso_generic(table: &FeatureTable, hyper: &EnsembleHyperparams) -> Result<EvaluationReport> {
    let subjects = table.subjects();
    if subjects.len() < 2 {
        return Err(Error::Protocol(
            "leave-one-subject-out needs at least 2 subjects".into(),
        ));
    }
    let mut units = Vec::with_capacity(subjects.len());
    for subject in &subjects {
        let test_idx = table.rows_of_subject(subject);
        let train_idx: Vec<usize> = (0..table.n_rows())
            .filter(|i| !test_idx.contains(i))
            .collect();
        debug_assert_eq!(train_idx.len() + test_idx.len(), table.n_rows());
        let model = fit_forest(&table.subset(&train_idx)?, hyper)?;
        let test = table.subset(&test_idx)?;
        units.push(UnitMetrics {
            unit: subject.clone(),
            n_test_rows: test.n_rows(),
            metrics: evaluate_model(&model, &test)?,
        });
    }
    build_report("loso", "all_subjects", hyper.seed, hyper, units)
}

/// Append the subject id as an integer-coded feature column, fit a forest,
/// and rank all features by MDI. A high rank for the probe column means the
/// model identifies *who* rather than *what state*.
///
/// # Errors
/// * [`Error::Protocol`] with fewer than two subjects.
/// * [`Error::Parameter`] if the table already has a `subject_id` column.
pub fn subject_id_probe(table: &FeatureTable, hyper: &EnsembleHyperparams) -> Result<ProbeReport> {
    const PROBE_COLUMN: &str = "subject_id";
    let subjects = table.subjects();
    if subjects.len() < 2 {
        return Err(Error::Protocol(
            "the subject-id probe needs at least 2 subjects".into(),
        ));
    }
    if table.feature_names().iter().any(|n| n == PROBE_COLUMN) {
        return Err(Error::Parameter(format!(
            "table already has a '{PROBE_COLUMN}' feature column"
        )));
    }
    let code_of = |id: &str| -> f64 {
        subjects
            .iter()
            .position(|s| s == id)
            .expect("known subject") as f64
    };
    let mut names = table.feature_names().to_vec();
    names.push(PROBE_COLUMN.to_string());
    let rows: Vec<FeatureRow> = table
        .rows()
        .iter()
        .map(|r| {
            let mut row = r.clone();
            row.features.push(code_of(&r.subject_id));
            row
        })
        .collect();
    let augmented = FeatureTable::new(names, rows, table.task_kind())?;
    let model = fit_forest(&augmented, hyper)?;
    let importances = model.feature_importances();

    let mut order: Vec<usize> = (0..importances.len()).collect();
    order.sort_by(|&a, &b| {
        importances[b]
            .partial_cmp(&importances[a])
            .expect("importances are finite")
            .then(a.cmp(&b))
    });
    let ranking: Vec<RankedFeature> = order
        .iter()
        .enumerate()
        .map(|(rank, &j)| RankedFeature {
            rank: rank + 1,
            name: augmented.feature_names()[j].clone(),
            importance: importances[j],
        })
        .collect();
    let probe_rank = ranking
        .iter()
        .find(|r| r.name == PROBE_COLUMN)
        .expect("probe column is ranked")
        .rank;
    Ok(ProbeReport {
        protocol: "subject_id_probe".to_string(),
        seed: hyper.seed,
        hyperparams: *hyper,
        probe_rank,
        ranking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// `n_per_subject` rows per subject; the label rule sees the subject
    /// index and the feature vector.
    fn subject_table(
        n_subjects: usize,
        n_per_subject: usize,
        p: usize,
        seed: u64,
        rule: impl Fn(usize, &[f64]) -> &'static str,
    ) -> FeatureTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        for s in 0..n_subjects {
            for _ in 0..n_per_subject {
                let features: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
                rows.push(FeatureRow {
                    subject_id: format!("s{s}"),
                    label: Some(rule(s, &features).to_string()),
                    target: None,
                    features,
                });
            }
        }
        let names = (0..p).map(|j| format!("f{j}")).collect();
        FeatureTable::new(names, rows, TaskKind::Classification).unwrap()
    }

    fn fast_hyper(seed: u64) -> EnsembleHyperparams {
        let mut h = EnsembleHyperparams::random_forest(TaskKind::Classification, seed);
        h.n_trees = 40;
        h
    }

    #[test]
    fn kfold_splits_are_exact_partitions_with_near_equal_folds() {
        let indices: Vec<usize> = (100..205).collect(); // 105 rows
        let splits = kfold_splits(&indices, 10, 7, "test");
        assert_eq!(splits.len(), 10);
        let mut seen = Vec::new();
        for (train, test) in &splits {
            assert!(
                test.len() == 10 || test.len() == 11,
                "fold size {}",
                test.len()
            );
            assert_eq!(train.len() + test.len(), indices.len());
            // Disjointness within the fold.
            assert!(test.iter().all(|i| !train.contains(i)));
            seen.extend(test.iter().copied());
        }
        // Coverage: every index tested exactly once.
        seen.sort_unstable();
        assert_eq!(seen, indices);
    }

    #[test]
    fn person_specific_kfold_learns_a_separable_subject() {
        let table = subject_table(
            2,
            100,
            2,
            3,
            |_, f| if f[0] > 0.0 { "stress" } else { "calm" },
        );
        let report = kfold_person_specific(&table, "s0", 10, &fast_hyper(5)).unwrap();
        assert_eq!(report.units.len(), 10);
        assert_eq!(report.protocol, "person_specific_kfold");
        assert_eq!(report.scope, "s0");
        assert!(
            report.mean.primary() > 0.95,
            "mean accuracy {}",
            report.mean.primary()
        );
        // Aggregate mean lies within the per-unit range.
        let values: Vec<f64> = report.units.iter().map(|u| u.metrics.primary()).collect();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(report.mean.primary() >= lo && report.mean.primary() <= hi);
    }

    #[test]
    fn kfold_preconditions_are_enforced() {
        let table = subject_table(1, 8, 2, 1, |_, _| "a");
        assert!(matches!(
            kfold_person_specific(&table, "s0", 1, &fast_hyper(0)),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            kfold_person_specific(&table, "s0", 10, &fast_hyper(0)),
            Err(Error::Protocol(_))
        ));
        assert!(matches!(
            kfold_person_specific(&table, "nobody", 2, &fast_hyper(0)),
            Err(Error::Protocol(_))
        ));
    }

    #[test]
    fn loso_builds_one_unit_per_subject() {
        let table = subject_table(3, 30, 2, 9, |_, f| if f[1] > 0.0 { "a" } else { "b" });
        let report = loso_generic(&table, &fast_hyper(2)).unwrap();
        assert_eq!(report.protocol, "loso");
        assert_eq!(report.units.len(), 3);
        let names: Vec<&str> = report.units.iter().map(|u| u.unit.as_str()).collect();
        assert_eq!(names, ["s0", "s1", "s2"]);
        assert_eq!(
            report.units.iter().map(|u| u.n_test_rows).sum::<usize>(),
            table.n_rows()
        );
    }

    #[test]
    fn loso_needs_two_subjects() {
        let table = subject_table(1, 20, 2, 4, |_, _| "a");
        assert!(matches!(
            loso_generic(&table, &fast_hyper(0)),
            Err(Error::Protocol(_))
        ));
    }

    #[test]
    fn person_specific_beats_loso_on_subject_flipped_labels() {
        // Each subject is perfectly separable on f0, but odd subjects flip
        // the rule, so cross-subject training is contradictory.
        let table = subject_table(4, 60, 2, 11, |s, f| {
            if (f[0] > 0.0) ^ (s % 2 == 1) {
                "a"
            } else {
                "b"
            }
        });
        let personal = kfold_person_specific_all(&table, 10, &fast_hyper(3)).unwrap();
        let generic = loso_generic(&table, &fast_hyper(3)).unwrap();
        assert!(
            personal.mean.primary() >= generic.mean.primary() + 0.2,
            "person-specific {} vs LOSO {}",
            personal.mean.primary(),
            generic.mean.primary()
        );
    }

    #[test]
    fn probe_ranks_subject_id_first_when_labels_follow_subjects() {
        let table = subject_table(4, 40, 3, 13, |s, _| if s % 2 == 0 { "a" } else { "b" });
        let probe = subject_id_probe(&table, &fast_hyper(1)).unwrap();
        assert_eq!(probe.probe_rank, 1, "ranking: {:?}", probe.ranking);
        assert_eq!(probe.ranking[0].name, "subject_id");
        assert_eq!(probe.ranking.len(), 4);
    }

    #[test]
    fn probe_ranks_subject_id_low_when_labels_ignore_subjects() {
        let table = subject_table(4, 40, 3, 17, |_, f| if f[0] > 0.0 { "a" } else { "b" });
        let probe = subject_id_probe(&table, &fast_hyper(1)).unwrap();
        assert!(probe.probe_rank > 1, "ranking: {:?}", probe.ranking);
        assert_eq!(probe.ranking[0].name, "f0");
    }

    #[test]
    fn reports_are_reproducible() {
        let table = subject_table(2, 40, 2, 23, |_, f| if f[0] > 0.2 { "a" } else { "b" });
        let a = kfold_person_specific(&table, "s1", 5, &fast_hyper(9)).unwrap();
        let b = kfold_person_specific(&table, "s1", 5, &fast_hyper(9)).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
