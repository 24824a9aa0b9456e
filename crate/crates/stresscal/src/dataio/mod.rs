//! Data ingest and persistence: feature tables, raw signal recordings,
//! model artifacts, and report writing.
//!
//! The on-disk formats are deliberately plain:
//!
//! * feature tables are CSV with a small sidecar schema file that names the
//!   subject/label/target columns (everything else is a feature),
//! * raw signals and inter-beat-interval series are one value per line,
//! * model artifacts and reports are JSON with deterministic byte output.
//!
//! All loaders validate shape and finiteness up front so the rest of the
//! pipeline can assume well-formed, NaN-free tables.

mod artifact;
mod report;

pub use artifact::{load_model_artifact, save_model_artifact, ModelArtifact, FORMAT_VERSION};
pub use report::{json_string, write_report, CsvReport, ReportFormat};

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::IbiSeries;

/// Kind of raw physiological signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    /// Electrocardiogram (millivolts, arbitrary offset).
    Ecg,
    /// Skin conductance (microsiemens).
    Eda,
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalKind::Ecg => write!(f, "ECG"),
            SignalKind::Eda => write!(f, "EDA"),
        }
    }
}

/// A uniformly sampled raw signal.
#[derive(Debug, Clone)]
pub struct SignalRecording {
    kind: SignalKind,
    sample_rate_hz: f64,
    samples: Vec<f64>,
}

impl SignalRecording {
    /// Wrap samples taken at `sample_rate_hz`.
    ///
    /// # Errors
    /// * [`Error::Parameter`] if the rate is not finite and positive.
    /// * [`Error::EmptyInput`] if `samples` is empty.
    /// * [`Error::Parameter`] if any sample is not finite.
    pub fn new(kind: SignalKind, sample_rate_hz: f64, samples: Vec<f64>) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::Parameter(format!(
                "sample rate must be positive and finite, got {sample_rate_hz}"
            )));
        }
        if samples.is_empty() {
            return Err(Error::EmptyInput(format!(
                "{kind} recording has no samples"
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!(
                "{kind} recording has a non-finite sample at index {i}"
            )));
        }
        Ok(Self {
            kind,
            sample_rate_hz,
            samples,
        })
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Recording duration in seconds (`n / rate`).
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Same recording with new samples (rate and kind preserved).
    pub(crate) fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Self::new(self.kind, self.sample_rate_hz, samples)
    }
}

/// Prediction task a table (or model) is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Classification,
    Regression,
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaskKind::Classification => write!(f, "classification"),
            TaskKind::Regression => write!(f, "regression"),
        }
    }
}

impl std::str::FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classification" => Ok(TaskKind::Classification),
            "regression" => Ok(TaskKind::Regression),
            other => Err(Error::Config(format!(
                "unknown task '{other}' (expected 'classification' or 'regression')"
            ))),
        }
    }
}

/// One observation: a subject, an optional class label, an optional numeric
/// target, and a dense feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub subject_id: String,
    pub label: Option<String>,
    pub target: Option<f64>,
    pub features: Vec<f64>,
}

/// A validated, NaN-free feature matrix with per-row subject provenance.
///
/// Invariants (enforced by [`FeatureTable::new`] and preserved by every
/// method): all rows have `feature_names.len()` finite features, subject ids
/// are non-empty, classification tables have a label on every row (drawn
/// from `label_set`, which is sorted and duplicate-free), and regression
/// tables have a finite target on every row.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    feature_names: Vec<String>,
    label_set: Vec<String>,
    task_kind: TaskKind,
    rows: Vec<FeatureRow>,
}

impl FeatureTable {
    /// Build a table and validate every invariant.
    ///
    /// The label set is derived as the sorted distinct labels present in
    /// `rows`; label indices used elsewhere in the crate always refer to a
    /// position in this sorted set.
    ///
    /// # Errors
    /// * [`Error::Schema`] for duplicate feature names.
    /// * [`Error::ShapeMismatch`] if a row's feature count differs from the
    ///   header.
    /// * [`Error::Parameter`] for non-finite features/targets or empty
    ///   subject ids (the offending row index is named).
    /// * [`Error::Schema`] if a classification row lacks a label or a
    ///   regression row lacks a target.
    pub fn new(
        feature_names: Vec<String>,
        rows: Vec<FeatureRow>,
        task_kind: TaskKind,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::Schema(format!("duplicate feature column '{name}'")));
            }
        }
        let mut labels = BTreeSet::new();
        for (i, row) in rows.iter().enumerate() {
            if row.features.len() != feature_names.len() {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} features, header declares {}",
                    row.features.len(),
                    feature_names.len()
                )));
            }
            if row.subject_id.is_empty() {
                return Err(Error::Parameter(format!("row {i} has an empty subject id")));
            }
            if let Some(j) = row.features.iter().position(|v| !v.is_finite()) {
                return Err(Error::Parameter(format!(
                    "row {i} has a non-finite value in feature '{}'",
                    feature_names[j]
                )));
            }
            match task_kind {
                TaskKind::Classification => {
                    if row.label.is_none() {
                        return Err(Error::Schema(format!(
                            "classification table: row {i} has no label"
                        )));
                    }
                }
                TaskKind::Regression => match row.target {
                    Some(t) if t.is_finite() => {}
                    Some(t) => {
                        return Err(Error::Parameter(format!(
                            "row {i} has a non-finite target {t}"
                        )))
                    }
                    None => {
                        return Err(Error::Schema(format!(
                            "regression table: row {i} has no target"
                        )))
                    }
                },
            }
            if let Some(l) = &row.label {
                labels.insert(l.clone());
            }
        }
        Ok(Self {
            feature_names,
            label_set: labels.into_iter().collect(),
            task_kind,
            rows,
        })
    }

    /// Internal constructor for subsets that must keep the parent's declared
    /// label set even when some class is absent from the surviving rows.
    fn with_parts(
        feature_names: Vec<String>,
        label_set: Vec<String>,
        task_kind: TaskKind,
        rows: Vec<FeatureRow>,
    ) -> Self {
        Self {
            feature_names,
            label_set,
            task_kind,
            rows,
        }
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Sorted distinct labels this table (or its parent) declared.
    pub fn label_set(&self) -> &[String] {
        &self.label_set
    }

    pub fn task_kind(&self) -> TaskKind {
        self.task_kind
    }

    pub fn rows(&self) -> &[FeatureRow] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Sorted distinct subject ids.
    pub fn subjects(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.rows.iter().map(|r| r.subject_id.as_str()).collect();
        set.into_iter().map(str::to_owned).collect()
    }

    /// Indices of the rows belonging to `subject_id`, in table order.
    pub fn rows_of_subject(&self, subject_id: &str) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.subject_id == subject_id)
            .map(|(i, _)| i)
            .collect()
    }

    /// Position of `label` in the declared label set.
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.label_set.iter().position(|l| l == label)
    }

    /// Per-row label indices into the declared label set.
    ///
    /// # Errors
    /// [`Error::Schema`] if any row lacks a label or carries one outside the
    /// declared set (only possible through subsetting bugs, so this guards an
    /// internal invariant too).
    pub fn label_indices(&self) -> Result<Vec<usize>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let label = r
                    .label
                    .as_deref()
                    .ok_or_else(|| Error::Schema(format!("row {i} has no label")))?;
                self.label_index(label).ok_or_else(|| {
                    Error::Schema(format!("row {i} label '{label}' not in declared label set"))
                })
            })
            .collect()
    }

    /// Per-row regression targets.
    ///
    /// # Errors
    /// [`Error::Schema`] if any row lacks a target.
    pub fn targets(&self) -> Result<Vec<f64>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.target
                    .ok_or_else(|| Error::Schema(format!("row {i} has no target")))
            })
            .collect()
    }

    /// New table containing the rows at `indices` (in the given order).
    /// The declared label set and task are preserved verbatim.
    ///
    /// # Errors
    /// [`Error::Parameter`] if an index is out of bounds.
    pub fn subset(&self, indices: &[usize]) -> Result<FeatureTable> {
        let mut rows = Vec::with_capacity(indices.len());
        for &i in indices {
            let row = self.rows.get(i).ok_or_else(|| {
                Error::Parameter(format!(
                    "row index {i} out of bounds for table with {} rows",
                    self.rows.len()
                ))
            })?;
            rows.push(row.clone());
        }
        Ok(Self::with_parts(
            self.feature_names.clone(),
            self.label_set.clone(),
            self.task_kind,
            rows,
        ))
    }

    /// New table keeping only the feature columns at `feature_indices`
    /// (in the given order). Rows, labels, and targets are untouched.
    ///
    /// # Errors
    /// [`Error::Parameter`] for out-of-bounds or duplicate indices.
    pub fn project(&self, feature_indices: &[usize]) -> Result<FeatureTable> {
        let mut seen = BTreeSet::new();
        for &f in feature_indices {
            if f >= self.feature_names.len() {
                return Err(Error::Parameter(format!(
                    "feature index {f} out of bounds for {} features",
                    self.feature_names.len()
                )));
            }
            if !seen.insert(f) {
                return Err(Error::Parameter(format!("duplicate feature index {f}")));
            }
        }
        let names = feature_indices
            .iter()
            .map(|&f| self.feature_names[f].clone())
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|r| FeatureRow {
                subject_id: r.subject_id.clone(),
                label: r.label.clone(),
                target: r.target,
                features: feature_indices.iter().map(|&f| r.features[f]).collect(),
            })
            .collect();
        Ok(Self::with_parts(
            names,
            self.label_set.clone(),
            self.task_kind,
            rows,
        ))
    }

    /// Concatenate two tables with identical header, label set, and task.
    /// Rows of `self` come first.
    ///
    /// # Errors
    /// [`Error::ShapeMismatch`] if headers, label sets, or tasks differ.
    pub fn concat(&self, other: &FeatureTable) -> Result<FeatureTable> {
        if self.feature_names != other.feature_names {
            return Err(Error::ShapeMismatch(
                "cannot concatenate tables with different feature columns".into(),
            ));
        }
        if self.label_set != other.label_set {
            return Err(Error::ShapeMismatch(
                "cannot concatenate tables with different label sets".into(),
            ));
        }
        if self.task_kind != other.task_kind {
            return Err(Error::ShapeMismatch(
                "cannot concatenate tables with different tasks".into(),
            ));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self::with_parts(
            self.feature_names.clone(),
            self.label_set.clone(),
            self.task_kind,
            rows,
        ))
    }

    /// Count rows per declared label, in label-set order.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.label_set.len()];
        for row in &self.rows {
            if let Some(l) = &row.label {
                if let Some(i) = self.label_index(l) {
                    counts[i] += 1;
                }
            }
        }
        counts
    }
}

/// Maps CSV columns onto table roles. Loaded from a sidecar file so feature
/// exports with arbitrary column layouts can be ingested without code edits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSchema {
    /// Column holding the subject identifier (required).
    pub subject: String,
    /// Column holding the class label, if any.
    pub label: Option<String>,
    /// Column holding the numeric target, if any.
    pub target: Option<String>,
    /// Explicit feature columns; `None` means "every remaining column".
    pub features: Option<Vec<String>>,
    /// Task override; defaults to classification when a label column exists,
    /// regression otherwise.
    pub task: Option<TaskKind>,
}

impl TableSchema {
    /// Minimal schema: subject + label columns, all other columns features.
    pub fn classification(subject: &str, label: &str) -> Self {
        Self {
            subject: subject.to_string(),
            label: Some(label.to_string()),
            target: None,
            features: None,
            task: Some(TaskKind::Classification),
        }
    }

    /// Parse a sidecar schema file.
    ///
    /// Format: one `key = value` pair per line; `#` starts a comment.
    /// Keys: `subject` (required), `label`, `target`, `features`
    /// (comma-separated), `task` (`classification` | `regression`).
    ///
    /// # Errors
    /// [`Error::Schema`] for unknown keys, duplicate keys, a missing
    /// `subject`, or an invalid `task` value.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Schema(format!("cannot read schema file {}: {e}", path.display()))
        })?;
        Self::parse(&text).map_err(|e| match e {
            Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Parse schema text (see [`TableSchema::from_file`]).
    pub fn parse(text: &str) -> Result<Self> {
        let mut subject = None;
        let mut label = None;
        let mut target = None;
        let mut features = None;
        let mut task = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Schema(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                return Err(Error::Schema(format!(
                    "line {}: empty value for '{key}'",
                    lineno + 1
                )));
            }
            let slot: &mut Option<String> = match key {
                "subject" => &mut subject,
                "label" => &mut label,
                "target" => &mut target,
                "features" => {
                    if features.is_some() {
                        return Err(Error::Schema(format!(
                            "duplicate key 'features' at line {}",
                            lineno + 1
                        )));
                    }
                    features = Some(
                        value
                            .split(',')
                            .map(|s| s.trim().to_string())
                            .filter(|s| !s.is_empty())
                            .collect::<Vec<_>>(),
                    );
                    continue;
                }
                "task" => {
                    if task.is_some() {
                        return Err(Error::Schema(format!(
                            "duplicate key 'task' at line {}",
                            lineno + 1
                        )));
                    }
                    task = Some(value.parse::<TaskKind>().map_err(|_| {
                        Error::Schema(format!(
                            "line {}: task must be 'classification' or 'regression', got '{value}'",
                            lineno + 1
                        ))
                    })?);
                    continue;
                }
                other => {
                    return Err(Error::Schema(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            };
            if slot.is_some() {
                return Err(Error::Schema(format!(
                    "duplicate key '{key}' at line {}",
                    lineno + 1
                )));
            }
            *slot = Some(value.to_string());
        }
        let subject =
            subject.ok_or_else(|| Error::Schema("missing required key 'subject'".into()))?;
        if label.is_none() && target.is_none() {
            return Err(Error::Schema(
                "schema declares neither 'label' nor 'target'".into(),
            ));
        }
        Ok(Self {
            subject,
            label,
            target,
            features,
            task,
        })
    }

    fn effective_task(&self) -> Result<TaskKind> {
        match self.task {
            Some(t) => {
                if t == TaskKind::Classification && self.label.is_none() {
                    return Err(Error::Schema(
                        "task is classification but no label column is declared".into(),
                    ));
                }
                if t == TaskKind::Regression && self.target.is_none() {
                    return Err(Error::Schema(
                        "task is regression but no target column is declared".into(),
                    ));
                }
                Ok(t)
            }
            None => {
                if self.label.is_some() {
                    Ok(TaskKind::Classification)
                } else {
                    Ok(TaskKind::Regression)
                }
            }
        }
    }
}

/// Load a feature table from CSV according to `schema`.
///
/// # Errors
/// * [`Error::Schema`] if a declared column is absent from the header, or a
///   row is missing its label/target (the record number is named).
/// * [`Error::Parse`] for unparseable numeric cells (record number named).
/// * Any [`FeatureTable::new`] validation error.
pub fn load_feature_table(path: &Path, schema: &TableSchema) -> Result<FeatureTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let path_str = path.display().to_string();

    let col = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::Schema(format!("{path_str}: column '{name}' not found in header"))
        })
    };
    let subject_col = col(&schema.subject)?;
    let label_col = schema.label.as_deref().map(col).transpose()?;
    let target_col = schema.target.as_deref().map(col).transpose()?;

    let feature_cols: Vec<usize> = match &schema.features {
        Some(names) => names.iter().map(|n| col(n)).collect::<Result<_>>()?,
        None => (0..headers.len())
            .filter(|&i| i != subject_col && Some(i) != label_col && Some(i) != target_col)
            .collect(),
    };
    if feature_cols.is_empty() {
        return Err(Error::Schema(format!(
            "{path_str}: no feature columns remain after assigning roles"
        )));
    }
    let feature_names: Vec<String> = feature_cols.iter().map(|&i| headers[i].clone()).collect();
    let task = schema.effective_task()?;

    let mut rows = Vec::new();
    for (rec_idx, record) in reader.records().enumerate() {
        let record = record?;
        // Header is record 0 in the file; data records are 1-based here.
        let recno = rec_idx + 1;
        let cell = |i: usize| -> Result<&str> {
            record.get(i).ok_or_else(|| Error::Parse {
                path: path_str.clone(),
                record: recno,
                message: format!("missing column {i}"),
            })
        };
        let subject_id = cell(subject_col)?.to_string();
        let label = match label_col {
            Some(c) => {
                let v = cell(c)?;
                if v.is_empty() {
                    if task == TaskKind::Classification {
                        return Err(Error::Schema(format!(
                            "{path_str}: record {recno}: label column '{}' is empty",
                            schema.label.as_deref().unwrap_or("?")
                        )));
                    }
                    None
                } else {
                    Some(v.to_string())
                }
            }
            None => None,
        };
        let target = match target_col {
            Some(c) => {
                let v = cell(c)?;
                if v.is_empty() {
                    None
                } else {
                    Some(v.parse::<f64>().map_err(|e| Error::Parse {
                        path: path_str.clone(),
                        record: recno,
                        message: format!("target '{v}': {e}"),
                    })?)
                }
            }
            None => None,
        };
        let mut features = Vec::with_capacity(feature_cols.len());
        for (&c, name) in feature_cols.iter().zip(&feature_names) {
            let v = cell(c)?;
            let parsed = v.parse::<f64>().map_err(|e| Error::Parse {
                path: path_str.clone(),
                record: recno,
                message: format!("feature '{name}' value '{v}': {e}"),
            })?;
            if !parsed.is_finite() {
                return Err(Error::Parse {
                    path: path_str.clone(),
                    record: recno,
                    message: format!("feature '{name}' is not finite ({v})"),
                });
            }
            features.push(parsed);
        }
        rows.push(FeatureRow {
            subject_id,
            label,
            target,
            features,
        });
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput(format!("{path_str}: no data records")));
    }
    FeatureTable::new(feature_names, rows, task)
}

/// Write a feature table as CSV (subject, label, target, then features).
///
/// Floats use Rust's shortest round-trip formatting, so loading the file
/// back reproduces every value bit-for-bit and reruns are byte-identical.
pub fn write_feature_table(table: &FeatureTable, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec!["subject_id".to_string()];
    let has_labels = table.rows.iter().any(|r| r.label.is_some());
    let has_targets = table.rows.iter().any(|r| r.target.is_some());
    if has_labels {
        header.push("label".to_string());
    }
    if has_targets {
        header.push("target".to_string());
    }
    header.extend(table.feature_names.iter().cloned());
    writer.write_record(&header)?;
    for row in &table.rows {
        let mut record = vec![row.subject_id.clone()];
        if has_labels {
            record.push(row.label.clone().unwrap_or_default());
        }
        if has_targets {
            record.push(row.target.map(|t| format!("{t}")).unwrap_or_default());
        }
        record.extend(row.features.iter().map(|v| format!("{v}")));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Sidecar schema matching the layout produced by [`write_feature_table`].
pub fn write_table_schema(table: &FeatureTable, path: &Path) -> Result<()> {
    let mut text = String::from("subject = subject_id\n");
    if table.rows.iter().any(|r| r.label.is_some()) {
        text.push_str("label = label\n");
    }
    if table.rows.iter().any(|r| r.target.is_some()) {
        text.push_str("target = target\n");
    }
    text.push_str(&format!("task = {}\n", table.task_kind));
    std::fs::write(path, text)?;
    Ok(())
}

/// Load a uniformly sampled signal: one sample per line, `#` comments and
/// blank lines ignored.
///
/// # Errors
/// [`Error::Parse`] for unparseable lines; [`SignalRecording::new`] errors
/// for empty or non-finite data.
pub fn load_signal_recording(
    path: &Path,
    kind: SignalKind,
    sample_rate_hz: f64,
) -> Result<SignalRecording> {
    let samples = load_value_lines(path)?;
    SignalRecording::new(kind, sample_rate_hz, samples)
}

/// Load an inter-beat-interval series: one interval in milliseconds per
/// line, `#` comments and blank lines ignored.
pub fn load_ibi_series(path: &Path) -> Result<IbiSeries> {
    let intervals = load_value_lines(path)?;
    IbiSeries::from_intervals(intervals)
}

fn load_value_lines(path: &Path) -> Result<Vec<f64>> {
    let path_str = path.display().to_string();
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut values = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let v = text.parse::<f64>().map_err(|e| Error::Parse {
            path: path_str.clone(),
            record: lineno + 1,
            message: format!("'{text}': {e}"),
        })?;
        values.push(v);
    }
    Ok(values)
}
