//! Feature engineering: skew-triggered power transforms, robust quantile
//! scaling, class rebalancing, and importance-based feature selection.
//!
//! The per-column policy applies at most one transform: columns whose
//! absolute skewness stays within the threshold are left alone; skewed
//! strictly-positive columns get `log(1+x)`; skewed nonnegative columns get
//! `sqrt(x)`; anything else gets a Yeo-Johnson transform with a fitted λ.
//! Every column is then scaled by `(x − median) / (Q3 − Q1)` using
//! statistics of the *fitted* data only, so a recipe can be replayed on a
//! disjoint test split without leakage.

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataio::{FeatureTable, TaskKind};
use crate::error::{Error, Result};
use crate::stats;

/// Default |skewness| above which a column is transformed.
pub const DEFAULT_SKEW_THRESHOLD: f64 = 0.75;

/// λ search interval and stopping tolerance for [`fit_yeo_johnson`].
const LAMBDA_RANGE: (f64, f64) = (-5.0, 5.0);
const LAMBDA_TOL: f64 = 1e-4;

/// Which transform a column receives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformKind {
    None,
    /// `log(1 + x)`, strictly positive columns.
    Log,
    /// `sqrt(x)`, nonnegative columns.
    Sqrt,
    /// Four-case power transform with parameter λ; defined for all reals.
    YeoJohnson {
        lambda: f64,
    },
}

impl TransformKind {
    fn apply(&self, x: f64) -> f64 {
        match self {
            TransformKind::None => x,
            TransformKind::Log => x.ln_1p(),
            TransformKind::Sqrt => x.sqrt(),
            TransformKind::YeoJohnson { lambda } => yeo_johnson(x, *lambda),
        }
    }
}

/// Robust-scaler statistics of one (transformed) column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

impl ScalerParams {
    /// Fit linear-interpolation quantiles.
    ///
    /// # Errors
    /// [`Error::EmptyInput`] on an empty column.
    pub fn fit(x: &[f64]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyInput("scaler column".into()));
        }
        let params = Self {
            median: stats::quantile(x, 0.5),
            q1: stats::quantile(x, 0.25),
            q3: stats::quantile(x, 0.75),
        };
        if params.q3 == params.q1 {
            warn!(
                "degenerate IQR (q1 = q3 = {}); scaler falls back to median-centering",
                params.q1
            );
        }
        Ok(params)
    }
}

/// `(x − median) / (Q3 − Q1)`; with a degenerate IQR the value is only
/// median-centered.
pub fn robust_scale(x: f64, params: &ScalerParams) -> f64 {
    let iqr = params.q3 - params.q1;
    if iqr > 0.0 {
        (x - params.median) / iqr
    } else {
        x - params.median
    }
}

/// Transform + scaler for one column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureTransform {
    pub transform: TransformKind,
    pub scaler: ScalerParams,
}

impl FeatureTransform {
    fn apply(&self, x: f64) -> f64 {
        robust_scale(self.transform.apply(x), &self.scaler)
    }
}

/// The full fitted engineering recipe, reusable on disjoint data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformRecipe {
    pub skew_threshold: f64,
    pub feature_names: Vec<String>,
    pub entries: Vec<FeatureTransform>,
}

/// Population skewness of a column.
///
/// # Errors
/// [`Error::InsufficientData`] for fewer than 3 values.
pub fn skewness(x: &[f64]) -> Result<f64> {
    if x.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "skewness needs at least 3 values, got {}",
            x.len()
        )));
    }
    Ok(stats::skewness_pop(x))
}

/// The four-case Yeo-Johnson transform. Total over all finite inputs.
pub fn yeo_johnson(y: f64, lambda: f64) -> f64 {
    if y >= 0.0 {
        if lambda == 0.0 {
            (y + 1.0).ln()
        } else {
            ((y + 1.0).powf(lambda) - 1.0) / lambda
        }
    } else if lambda == 2.0 {
        -(1.0 - y).ln()
    } else {
        -((1.0 - y).powf(2.0 - lambda) - 1.0) / (2.0 - lambda)
    }
}

/// Profile Gaussian log-likelihood of λ (constant terms dropped): the usual
/// `-n/2 · ln σ̂²` plus the Jacobian term `(λ−1) Σ sign(y) ln(1+|y|)`.
fn yeo_johnson_log_likelihood(x: &[f64], lambda: f64) -> f64 {
    let transformed: Vec<f64> = x.iter().map(|&v| yeo_johnson(v, lambda)).collect();
    if transformed.iter().any(|v| !v.is_finite()) {
        return f64::NEG_INFINITY;
    }
    let var = stats::var_pop(&transformed);
    if !(var.is_finite() && var > 0.0) {
        return f64::NEG_INFINITY;
    }
    let n = x.len() as f64;
    let jacobian: f64 = x.iter().map(|&v| v.signum() * v.abs().ln_1p()).sum();
    -0.5 * n * var.ln() + (lambda - 1.0) * jacobian
}

/// Fit λ by golden-section search of the profile log-likelihood over
/// [-5, 5] to a 1e-4 interval.
///
/// # Errors
/// [`Error::InsufficientData`] for fewer than 3 values. A zero-variance
/// column is not an error: λ = 1 (identity) is returned with a warning.
pub fn fit_yeo_johnson(x: &[f64]) -> Result<f64> {
    if x.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "Yeo-Johnson fit needs at least 3 values, got {}",
            x.len()
        )));
    }
    if stats::var_pop(x) == 0.0 {
        warn!("Yeo-Johnson fit on a constant column; using identity lambda = 1");
        return Ok(1.0);
    }
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = LAMBDA_RANGE;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = yeo_johnson_log_likelihood(x, c);
    let mut fd = yeo_johnson_log_likelihood(x, d);
    while b - a > LAMBDA_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = yeo_johnson_log_likelihood(x, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = yeo_johnson_log_likelihood(x, d);
        }
    }
    Ok((a + b) / 2.0)
}

fn column(table: &FeatureTable, j: usize) -> Vec<f64> {
    table.rows().iter().map(|r| r.features[j]).collect()
}

/// Fit the per-column policy on `table` and return the engineered table
/// plus the recipe that reproduces it.
///
/// Columns with fewer than 3 rows cannot support a skewness estimate and
/// are left untransformed (scaling still applies).
///
/// # Errors
/// * [`Error::EmptyInput`] on an empty table.
/// * [`Error::Parameter`] for a non-positive threshold.
pub fn apply_transform_policy(
    table: &FeatureTable,
    skew_threshold: f64,
) -> Result<(FeatureTable, TransformRecipe)> {
    if table.n_rows() == 0 {
        return Err(Error::EmptyInput("transform policy input table".into()));
    }
    if !(skew_threshold.is_finite() && skew_threshold > 0.0) {
        return Err(Error::Parameter(format!(
            "skew threshold must be positive and finite, got {skew_threshold}"
        )));
    }

    let mut entries = Vec::with_capacity(table.n_features());
    for j in 0..table.n_features() {
        let col = column(table, j);
        let kind = if col.len() < 3 {
            TransformKind::None
        } else {
            let s = stats::skewness_pop(&col);
            if s.abs() <= skew_threshold {
                TransformKind::None
            } else if col.iter().all(|&v| v > 0.0) {
                TransformKind::Log
            } else if col.iter().all(|&v| v >= 0.0) {
                TransformKind::Sqrt
            } else {
                TransformKind::YeoJohnson {
                    lambda: fit_yeo_johnson(&col)?,
                }
            }
        };
        let transformed: Vec<f64> = col.iter().map(|&v| kind.apply(v)).collect();
        let scaler = ScalerParams::fit(&transformed)?;
        entries.push(FeatureTransform {
            transform: kind,
            scaler,
        });
    }
    let recipe = TransformRecipe {
        skew_threshold,
        feature_names: table.feature_names().to_vec(),
        entries,
    };
    let engineered = apply_recipe(table, &recipe)?;
    Ok((engineered, recipe))
}

/// Replay a fitted recipe on a table with the same feature columns.
///
/// # Errors
/// [`Error::ShapeMismatch`] when the column names differ from those the
/// recipe was fitted on.
pub fn apply_recipe(table: &FeatureTable, recipe: &TransformRecipe) -> Result<FeatureTable> {
    if table.feature_names() != recipe.feature_names.as_slice() {
        return Err(Error::ShapeMismatch(
            "table columns do not match the transform recipe".into(),
        ));
    }
    let rows = table
        .rows()
        .iter()
        .map(|r| {
            let mut row = r.clone();
            for (v, entry) in row.features.iter_mut().zip(&recipe.entries) {
                *v = entry.apply(*v);
            }
            row
        })
        .collect();
    FeatureTable::new(recipe.feature_names.clone(), rows, table.task_kind())
}

/// Downsample every class to the minority-class count, uniformly at random
/// with the given seed. Surviving rows keep their original relative order.
///
/// # Errors
/// [`Error::Parameter`] if the table is not a classification table or has
/// an empty label set.
pub fn rebalance(table: &FeatureTable, seed: u64) -> Result<FeatureTable> {
    if table.task_kind() != TaskKind::Classification || table.label_set().is_empty() {
        return Err(Error::Parameter(
            "rebalancing requires a labeled classification table".into(),
        ));
    }
    let counts = table.class_counts();
    if counts.contains(&0) {
        return Err(Error::Parameter(
            "rebalancing requires at least one row per declared class".into(),
        ));
    }
    let minority = *counts.iter().min().expect("label set is non-empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = Vec::with_capacity(minority * counts.len());
    let labels = table.label_indices()?;
    for class in 0..table.label_set().len() {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect();
        members.shuffle(&mut rng);
        keep.extend(members.into_iter().take(minority));
    }
    keep.sort_unstable();
    table.subset(&keep)
}

/// Feature-selection policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionPolicy {
    /// Keep the `k` most important features (clamped to the feature count).
    TopK(usize),
    /// Keep features with importance ≥ the threshold.
    MinImportance(f64),
}

impl std::str::FromStr for SelectionPolicy {
    type Err = Error;

    /// Parse `top_k=N` or `min_mdi=X`.
    fn from_str(s: &str) -> Result<Self> {
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("selection policy '{s}' is not key=value")))?;
        match key.trim() {
            "top_k" => value
                .trim()
                .parse::<usize>()
                .map(SelectionPolicy::TopK)
                .map_err(|e| Error::Usage(format!("top_k value '{value}': {e}"))),
            "min_mdi" => value
                .trim()
                .parse::<f64>()
                .map(SelectionPolicy::MinImportance)
                .map_err(|e| Error::Usage(format!("min_mdi value '{value}': {e}"))),
            other => Err(Error::Usage(format!(
                "unknown selection policy '{other}' (expected top_k or min_mdi)"
            ))),
        }
    }
}

/// Select feature indices by descending importance under `policy`.
/// Ties break toward the lower index so the result is deterministic.
///
/// # Errors
/// * [`Error::Parameter`] if the importances are not normalized to sum 1
///   (±1e-6) or contain negatives.
/// * [`Error::Policy`] if the selection comes out empty.
pub fn select_features(importances: &[f64], policy: SelectionPolicy) -> Result<Vec<usize>> {
    if importances.is_empty() {
        return Err(Error::EmptyInput("importance vector".into()));
    }
    if importances.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::Parameter(
            "importances must be finite and nonnegative".into(),
        ));
    }
    let total: f64 = importances.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::Parameter(format!(
            "importances must be normalized to sum 1, got {total}"
        )));
    }
    let mut order: Vec<usize> = (0..importances.len()).collect();
    order.sort_by(|&a, &b| {
        importances[b]
            .partial_cmp(&importances[a])
            .expect("finite importances")
            .then(a.cmp(&b))
    });
    let selected: Vec<usize> = match policy {
        SelectionPolicy::TopK(k) => order.into_iter().take(k).collect(),
        SelectionPolicy::MinImportance(threshold) => order
            .into_iter()
            .filter(|&i| importances[i] >= threshold)
            .collect(),
    };
    if selected.is_empty() {
        return Err(Error::Policy("selection policy keeps zero features".into()));
    }
    Ok(selected)
}
