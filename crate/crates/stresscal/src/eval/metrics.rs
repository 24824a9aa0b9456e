//! Classification and regression metrics with macro averaging over the
//! declared label set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats;

/// Metrics of one evaluation. Classification metrics are macro-averaged:
/// per-class precision/recall over the full declared label set (classes
/// absent from both truth and prediction contribute 0), and `f1` is the
/// harmonic mean of the macro precision and macro recall (0 when their sum
/// is 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum Metrics {
    Classification {
        accuracy: f64,
        precision: f64,
        recall: f64,
        f1: f64,
    },
    Regression {
        mae: f64,
        rmse: f64,
    },
}

impl Metrics {
    /// The headline value: accuracy for classification, MAE for regression.
    pub fn primary(&self) -> f64 {
        match self {
            Metrics::Classification { accuracy, .. } => *accuracy,
            Metrics::Regression { mae, .. } => *mae,
        }
    }

    /// Field names and values, in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, f64)> {
        match self {
            Metrics::Classification {
                accuracy,
                precision,
                recall,
                f1,
            } => vec![
                ("accuracy", *accuracy),
                ("precision", *precision),
                ("recall", *recall),
                ("f1", *f1),
            ],
            Metrics::Regression { mae, rmse } => vec![("mae", *mae), ("rmse", *rmse)],
        }
    }

    fn from_fields(template: &Metrics, values: &[f64]) -> Metrics {
        match template {
            Metrics::Classification { .. } => Metrics::Classification {
                accuracy: values[0],
                precision: values[1],
                recall: values[2],
                f1: values[3],
            },
            Metrics::Regression { .. } => Metrics::Regression {
                mae: values[0],
                rmse: values[1],
            },
        }
    }
}

fn check_lengths(n_true: usize, n_pred: usize) -> Result<()> {
    if n_true == 0 {
        return Err(Error::EmptyInput("metric computation".into()));
    }
    if n_true != n_pred {
        return Err(Error::ShapeMismatch(format!(
            "{n_true} truth values but {n_pred} predictions"
        )));
    }
    Ok(())
}

/// Accuracy plus macro precision/recall/F1 over `n_classes` declared labels.
///
/// # Errors
/// * [`Error::EmptyInput`] / [`Error::ShapeMismatch`] on bad lengths.
/// * [`Error::Parameter`] when a class index is out of range.
pub fn classification_metrics(
    y_true: &[usize],
    y_pred: &[usize],
    n_classes: usize,
) -> Result<Metrics> {
    check_lengths(y_true.len(), y_pred.len())?;
    if y_true.iter().chain(y_pred).any(|&c| c >= n_classes) {
        return Err(Error::Parameter(format!(
            "class index out of range for {n_classes} declared labels"
        )));
    }
    let mut tp = vec![0usize; n_classes];
    let mut fp = vec![0usize; n_classes];
    let mut fn_ = vec![0usize; n_classes];
    let mut correct = 0usize;
    for (&t, &p) in y_true.iter().zip(y_pred) {
        if t == p {
            correct += 1;
            tp[t] += 1;
        } else {
            fp[p] += 1;
            fn_[t] += 1;
        }
    }
    let per_class = |num: &[usize], den_extra: &[usize]| -> f64 {
        (0..n_classes)
            .map(|k| {
                let den = num[k] + den_extra[k];
                if den == 0 {
                    0.0
                } else {
                    num[k] as f64 / den as f64
                }
            })
            .sum::<f64>()
            / n_classes as f64
    };
    let precision = per_class(&tp, &fp);
    let recall = per_class(&tp, &fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Metrics::Classification {
        accuracy: correct as f64 / y_true.len() as f64,
        precision,
        recall,
        f1,
    })
}

/// MAE and RMSE.
///
/// # Errors
/// [`Error::EmptyInput`] / [`Error::ShapeMismatch`] on bad lengths.
pub fn regression_metrics(y_true: &[f64], y_pred: &[f64]) -> Result<Metrics> {
    check_lengths(y_true.len(), y_pred.len())?;
    let n = y_true.len() as f64;
    let mae = y_true
        .iter()
        .zip(y_pred)
        .map(|(t, p)| (t - p).abs())
        .sum::<f64>()
        / n;
    let mse = y_true
        .iter()
        .zip(y_pred)
        .map(|(t, p)| (t - p) * (t - p))
        .sum::<f64>()
        / n;
    Ok(Metrics::Regression {
        mae,
        rmse: mse.sqrt(),
    })
}

/// Per-field mean and population standard deviation over `metrics`, which
/// must all be the same variant.
///
/// # Errors
/// [`Error::EmptyInput`] on an empty slice, [`Error::ShapeMismatch`] on
/// mixed variants.
pub fn aggregate_metrics(metrics: &[Metrics]) -> Result<(Metrics, Metrics)> {
    let first = metrics
        .first()
        .ok_or_else(|| Error::EmptyInput("metric aggregation".into()))?;
    let names: Vec<&str> = first.fields().iter().map(|(n, _)| *n).collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(metrics.len()); names.len()];
    for m in metrics {
        let fields = m.fields();
        if fields.len() != names.len() || fields.iter().zip(&names).any(|((n, _), e)| n != e) {
            return Err(Error::ShapeMismatch(
                "cannot aggregate classification and regression metrics together".into(),
            ));
        }
        for (col, (_, v)) in columns.iter_mut().zip(fields) {
            col.push(v);
        }
    }
    let means: Vec<f64> = columns.iter().map(|c| stats::mean(c)).collect();
    let stds: Vec<f64> = columns.iter().map(|c| stats::std_pop(c)).collect();
    Ok((
        Metrics::from_fields(first, &means),
        Metrics::from_fields(first, &stds),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions_score_one() {
        let m = classification_metrics(&[0, 1, 2, 1], &[0, 1, 2, 1], 3).unwrap();
        assert_eq!(
            m,
            Metrics::Classification {
                accuracy: 1.0,
                precision: 1.0,
                recall: 1.0,
                f1: 1.0
            }
        );
    }

    #[test]
    fn hand_computed_confusion_matrix_oracle() {
        // y=[0,0,1,1], yhat=[0,1,1,1]:
        //   class 0: tp=1, fp=0, fn=1 -> P=1,   R=1/2
        //   class 1: tp=2, fp=1, fn=0 -> P=2/3, R=1
        let m = classification_metrics(&[0, 0, 1, 1], &[0, 1, 1, 1], 2).unwrap();
        match m {
            Metrics::Classification {
                accuracy,
                precision,
                recall,
                f1,
            } => {
                assert_eq!(accuracy, 0.75);
                assert!((precision - 5.0 / 6.0).abs() < 1e-12);
                assert!((recall - 0.75).abs() < 1e-12);
                assert!((f1 - 15.0 / 19.0).abs() < 1e-12);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn absent_classes_contribute_zero_to_macro_averages() {
        // Only class 0 ever appears, predicted perfectly, over a 2-label set.
        let m = classification_metrics(&[0, 0, 0], &[0, 0, 0], 2).unwrap();
        match m {
            Metrics::Classification {
                accuracy,
                precision,
                recall,
                ..
            } => {
                assert_eq!(accuracy, 1.0);
                assert_eq!(precision, 0.5);
                assert_eq!(recall, 0.5);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn regression_hand_oracle() {
        let m = regression_metrics(&[1.0, 2.0, 3.0], &[2.0, 2.0, 5.0]).unwrap();
        match m {
            Metrics::Regression { mae, rmse } => {
                assert_eq!(mae, 1.0);
                assert!((rmse - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
                assert!((rmse - 1.2909944487358056).abs() < 1e-12);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn constant_error_makes_mae_equal_rmse() {
        let y = [4.0, 7.0, -2.0];
        let yhat: Vec<f64> = y.iter().map(|v| v + 2.5).collect();
        match regression_metrics(&y, &yhat).unwrap() {
            Metrics::Regression { mae, rmse } => {
                assert!((mae - 2.5).abs() < 1e-12);
                assert!((rmse - 2.5).abs() < 1e-12);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn rmse_dominates_mae() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let n = rng.gen_range(1..30);
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let yhat: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            match regression_metrics(&y, &yhat).unwrap() {
                Metrics::Regression { mae, rmse } => {
                    assert!(rmse >= mae - 1e-12, "rmse {rmse} < mae {mae}");
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(matches!(
            classification_metrics(&[], &[], 2),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            classification_metrics(&[0, 1], &[0], 2),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            classification_metrics(&[0, 2], &[0, 1], 2),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            regression_metrics(&[1.0], &[1.0, 2.0]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn aggregation_reports_mean_and_population_std() {
        let ms = [
            Metrics::Regression {
                mae: 1.0,
                rmse: 2.0,
            },
            Metrics::Regression {
                mae: 3.0,
                rmse: 4.0,
            },
        ];
        let (mean, std) = aggregate_metrics(&ms).unwrap();
        assert_eq!(
            mean,
            Metrics::Regression {
                mae: 2.0,
                rmse: 3.0
            }
        );
        assert_eq!(
            std,
            Metrics::Regression {
                mae: 1.0,
                rmse: 1.0
            }
        );
        let mixed = [
            Metrics::Regression {
                mae: 1.0,
                rmse: 2.0,
            },
            Metrics::Classification {
                accuracy: 1.0,
                precision: 1.0,
                recall: 1.0,
                f1: 1.0,
            },
        ];
        assert!(aggregate_metrics(&mixed).is_err());
    }
}
