//! End-to-end feature extraction: raw recordings in, labeled feature
//! tables out.
//!
//! Each subject contributes an HRV table row per sliding IBI window and an
//! EDA table row per sliding sample window. Rows are labeled by the
//! experimental condition active at the window's end; windows that straddle
//! a condition boundary are dropped so no row mixes conditions. Subjects are
//! processed in sorted-id order and windows in start order, making the
//! output row order deterministic regardless of parallel scheduling.

use rayon::prelude::*;

use crate::dataio::{FeatureRow, FeatureTable, SignalRecording, TaskKind};
use crate::error::{Error, Result};
use crate::features::window::{ibi_windows, sample_windows};
use crate::features::{
    eda_feature_vector, hrv_feature_vector_in, FrequencyBands, EDA_FEATURE_NAMES, HRV_FEATURE_NAMES,
};
use crate::signal::{denoise_eda, detect_r_peaks, detect_scr_events, FilterSpec, IbiSeries};

/// One labeled stretch of an experiment: `[start_s, end_s]` carries `label`
/// and, optionally, a self-report score used as regression target.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSpan {
    pub label: String,
    pub start_s: f64,
    pub end_s: f64,
    pub target: Option<f64>,
}

/// Everything recorded for one subject.
#[derive(Debug, Clone)]
pub struct SubjectRecording {
    pub subject_id: String,
    /// Raw ECG; used when no pre-computed IBI series is supplied.
    pub ecg: Option<SignalRecording>,
    /// Pre-computed inter-beat intervals (takes precedence over `ecg`).
    pub ibi: Option<IbiSeries>,
    /// Raw skin conductance.
    pub eda: Option<SignalRecording>,
    pub conditions: Vec<ConditionSpan>,
}

/// Extraction parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractOptions {
    /// HRV window length, seconds (>= 300 so the VLF band is resolvable).
    pub hrv_window_s: f64,
    /// EDA window length, seconds.
    pub eda_window_s: f64,
    /// EDA window step, samples.
    pub eda_step: usize,
    /// EDA denoising parameters.
    pub filter: FilterSpec,
    /// SCR onset slope threshold, µS/s.
    pub scr_threshold: f64,
    /// Spectral band edges for the VLF/LF/HF features.
    pub bands: FrequencyBands,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            hrv_window_s: 300.0,
            eda_window_s: 600.0,
            eda_step: 1,
            filter: FilterSpec::default(),
            scr_threshold: crate::signal::DEFAULT_SCR_THRESHOLD_US_PER_S,
            bands: FrequencyBands::default(),
        }
    }
}

/// Per-subject bookkeeping for the extraction log.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct SubjectLog {
    pub subject_id: String,
    pub hrv_rows: usize,
    pub hrv_dropped: usize,
    pub eda_rows: usize,
    pub eda_dropped: usize,
    pub warnings: Vec<String>,
}

/// Extraction result: one table per modality (absent when no subject
/// carried that modality) plus per-subject logs.
#[derive(Debug)]
pub struct ExtractOutput {
    pub hrv: Option<FeatureTable>,
    pub eda: Option<FeatureTable>,
    pub logs: Vec<SubjectLog>,
}

/// Find the condition active at time `t` (inclusive ends, first match in
/// start order, so a window ending exactly on a boundary belongs to the
/// span it closes).
fn span_at(conditions: &[ConditionSpan], t: f64) -> Option<&ConditionSpan> {
    conditions.iter().find(|c| c.start_s <= t && t <= c.end_s)
}

fn validate_conditions(subject: &SubjectRecording) -> Result<Vec<ConditionSpan>> {
    if subject.conditions.is_empty() {
        return Err(Error::Parameter(format!(
            "subject '{}' has no condition spans",
            subject.subject_id
        )));
    }
    let mut spans = subject.conditions.clone();
    for c in &spans {
        if c.label.is_empty() {
            return Err(Error::Parameter(format!(
                "subject '{}' has a condition with an empty label",
                subject.subject_id
            )));
        }
        if !(c.start_s.is_finite() && c.end_s.is_finite() && c.start_s < c.end_s) {
            return Err(Error::Parameter(format!(
                "subject '{}' condition '{}' has an invalid span [{}, {}]",
                subject.subject_id, c.label, c.start_s, c.end_s
            )));
        }
    }
    spans.sort_by(|a, b| a.start_s.partial_cmp(&b.start_s).expect("finite spans"));
    for pair in spans.windows(2) {
        if pair[1].start_s < pair[0].end_s {
            return Err(Error::Parameter(format!(
                "subject '{}': conditions '{}' and '{}' overlap",
                subject.subject_id, pair[0].label, pair[1].label
            )));
        }
    }
    Ok(spans)
}

/// Label a window by the span containing its end; `None` when the window
/// straddles a boundary or falls outside every span.
fn label_window(conditions: &[ConditionSpan], start_t: f64, end_t: f64) -> Option<&ConditionSpan> {
    let span = span_at(conditions, end_t)?;
    if start_t >= span.start_s {
        Some(span)
    } else {
        None
    }
}

fn hrv_rows_for_subject(
    subject: &SubjectRecording,
    conditions: &[ConditionSpan],
    options: &ExtractOptions,
    log: &mut SubjectLog,
) -> Result<Vec<FeatureRow>> {
    let series = match (&subject.ibi, &subject.ecg) {
        (Some(ibi), _) => ibi.clone(),
        (None, Some(ecg)) => match detect_r_peaks(ecg) {
            Ok(s) => s,
            Err(Error::InsufficientSignal(msg)) => {
                log.warnings
                    .push(format!("HRV skipped: insufficient ECG signal ({msg})"));
                return Ok(Vec::new());
            }
            Err(e) => return Err(e),
        },
        (None, None) => return Ok(Vec::new()),
    };
    let windows = match ibi_windows(&series, options.hrv_window_s) {
        Ok(w) => w,
        Err(Error::InsufficientData(msg)) => {
            log.warnings.push(format!("HRV produced 0 rows: {msg}"));
            return Ok(Vec::new());
        }
        Err(e) => return Err(e),
    };

    let intervals = series.intervals_ms();
    let labeled: Vec<_> = windows
        .iter()
        .filter_map(|w| {
            label_window(conditions, w.start_ms / 1000.0, w.end_ms / 1000.0).map(|span| (w, span))
        })
        .collect();
    log.hrv_dropped = windows.len() - labeled.len();

    let rows: Vec<FeatureRow> = labeled
        .par_iter()
        .map(|(w, span)| -> Result<FeatureRow> {
            let features = hrv_feature_vector_in(&intervals[w.start..w.end], &options.bands)?;
            Ok(FeatureRow {
                subject_id: subject.subject_id.clone(),
                label: Some(span.label.clone()),
                target: span.target,
                features,
            })
        })
        .collect::<Result<_>>()?;
    log.hrv_rows = rows.len();
    Ok(rows)
}

fn eda_rows_for_subject(
    subject: &SubjectRecording,
    conditions: &[ConditionSpan],
    options: &ExtractOptions,
    log: &mut SubjectLog,
) -> Result<Vec<FeatureRow>> {
    let Some(raw) = &subject.eda else {
        return Ok(Vec::new());
    };
    let denoised = denoise_eda(raw, &options.filter)?;
    let events = detect_scr_events(&denoised, options.scr_threshold)?;
    let windows = match sample_windows(
        denoised.len(),
        denoised.sample_rate_hz(),
        options.eda_window_s,
        options.eda_step,
    ) {
        Ok(w) => w,
        Err(Error::InsufficientData(msg)) => {
            log.warnings.push(format!("EDA produced 0 rows: {msg}"));
            return Ok(Vec::new());
        }
        Err(e) => return Err(e),
    };

    let fs = denoised.sample_rate_hz();
    let samples = denoised.samples();
    let onset_idx: Vec<usize> = events.onsets.iter().map(|e| e.index).collect();
    let onset_amp: Vec<f64> = events.onsets.iter().map(|e| e.conductance).collect();
    let peak_idx: Vec<usize> = events.peaks.iter().map(|e| e.index).collect();
    let peak_amp: Vec<f64> = events.peaks.iter().map(|e| e.conductance).collect();

    let labeled: Vec<_> = windows
        .iter()
        .filter_map(|w| {
            let start_t = w.start as f64 / fs;
            let end_t = (w.end - 1) as f64 / fs;
            label_window(conditions, start_t, end_t).map(|span| (w, span))
        })
        .collect();
    log.eda_dropped = windows.len() - labeled.len();

    // Event indices are sorted by construction; restrict by binary search.
    let slice_in = |idx: &[usize], amp: &[f64], lo: usize, hi: usize| -> Vec<f64> {
        let a = idx.partition_point(|&i| i < lo);
        let b = idx.partition_point(|&i| i < hi);
        amp[a..b].to_vec()
    };

    let rows: Vec<FeatureRow> = labeled
        .par_iter()
        .map(|(w, span)| -> Result<FeatureRow> {
            let onsets = slice_in(&onset_idx, &onset_amp, w.start, w.end);
            let peaks = slice_in(&peak_idx, &peak_amp, w.start, w.end);
            let features = eda_feature_vector(&samples[w.start..w.end], fs, &onsets, &peaks)?;
            Ok(FeatureRow {
                subject_id: subject.subject_id.clone(),
                label: Some(span.label.clone()),
                target: span.target,
                features,
            })
        })
        .collect::<Result<_>>()?;
    log.eda_rows = rows.len();
    Ok(rows)
}

/// Run extraction over all subjects.
///
/// # Errors
/// * [`Error::EmptyInput`] when `subjects` is empty.
/// * [`Error::Parameter`] for invalid condition spans, an HRV window below
///   300 s, or duplicate subject ids.
/// * Signal-processing errors other than "too short" propagate unchanged;
///   too-short recordings merely log a warning and contribute 0 rows.
pub fn extract_feature_table(
    subjects: &[SubjectRecording],
    options: &ExtractOptions,
) -> Result<ExtractOutput> {
    if subjects.is_empty() {
        return Err(Error::EmptyInput("no subjects to extract from".into()));
    }
    if options.hrv_window_s < 300.0 {
        return Err(Error::Parameter(format!(
            "HRV window of {} s cannot resolve the 0.0033 Hz VLF band edge; use at least 300 s",
            options.hrv_window_s
        )));
    }
    options.bands.validate()?;

    let mut order: Vec<&SubjectRecording> = subjects.iter().collect();
    order.sort_by(|a, b| a.subject_id.cmp(&b.subject_id));
    for pair in order.windows(2) {
        if pair[0].subject_id == pair[1].subject_id {
            return Err(Error::Parameter(format!(
                "duplicate subject id '{}'",
                pair[0].subject_id
            )));
        }
    }

    let mut hrv_rows = Vec::new();
    let mut eda_rows = Vec::new();
    let mut logs = Vec::new();
    let mut any_hrv_source = false;
    let mut any_eda_source = false;

    for subject in order {
        let conditions = validate_conditions(subject)?;
        let mut log = SubjectLog {
            subject_id: subject.subject_id.clone(),
            ..SubjectLog::default()
        };
        if subject.ibi.is_some() || subject.ecg.is_some() {
            any_hrv_source = true;
            hrv_rows.extend(hrv_rows_for_subject(
                subject,
                &conditions,
                options,
                &mut log,
            )?);
        }
        if subject.eda.is_some() {
            any_eda_source = true;
            eda_rows.extend(eda_rows_for_subject(
                subject,
                &conditions,
                options,
                &mut log,
            )?);
        }
        for w in &log.warnings {
            log::warn!("subject '{}': {w}", subject.subject_id);
        }
        logs.push(log);
    }

    let hrv = if any_hrv_source {
        Some(FeatureTable::new(
            HRV_FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            hrv_rows,
            TaskKind::Classification,
        )?)
    } else {
        None
    };
    let eda = if any_eda_source {
        Some(FeatureTable::new(
            EDA_FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            eda_rows,
            TaskKind::Classification,
        )?)
    } else {
        None
    };
    Ok(ExtractOutput { hrv, eda, logs })
}
