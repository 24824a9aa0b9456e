//! Sliding-window machinery for beat series and sampled signals.
//!
//! HRV windows cover a fixed span of *cumulative time* and advance one beat
//! at a time, so the number of intervals per window varies. EDA windows are
//! plain fixed-length sample ranges advancing by a configurable step.

use crate::error::{Error, Result};
use crate::signal::IbiSeries;

/// How a window advances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowStep {
    /// Advance by one beat (HRV convention).
    OneBeat,
    /// Advance by a fixed number of samples (EDA convention).
    Samples(usize),
}

/// Window length and step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub length_s: f64,
    pub step: WindowStep,
}

impl WindowSpec {
    pub fn hrv_default() -> Self {
        Self {
            length_s: 300.0,
            step: WindowStep::OneBeat,
        }
    }

    pub fn eda_default() -> Self {
        Self {
            length_s: 600.0,
            step: WindowStep::Samples(1),
        }
    }
}

/// One HRV window: the half-open interval range `[start, end)` into an
/// [`IbiSeries`], plus its time span in milliseconds from series start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbiWindow {
    pub start: usize,
    pub end: usize,
    pub start_ms: f64,
    pub end_ms: f64,
}

/// Enumerate HRV windows: window `i` starts at interval `i` and extends to
/// the smallest `j` whose cumulative time spans at least `length_s`.
///
/// # Errors
/// * [`Error::Parameter`] if `length_s` is not positive and finite.
/// * [`Error::InsufficientData`] if the series is shorter than one window.
pub fn ibi_windows(series: &IbiSeries, length_s: f64) -> Result<Vec<IbiWindow>> {
    if !(length_s.is_finite() && length_s > 0.0) {
        return Err(Error::Parameter(format!(
            "window length must be positive and finite, got {length_s}"
        )));
    }
    let length_ms = length_s * 1000.0;
    let t = series.t_ms();
    let n = series.len();
    let mut windows = Vec::new();
    let mut j = 1usize;
    for i in 0..n {
        let start_ms = series.start_of(i);
        if j < i + 1 {
            j = i + 1;
        }
        // Smallest j with t[j-1] covering the full span; j only moves
        // forward as i does, so the whole scan is linear.
        while j <= n && t[j - 1] - start_ms < length_ms {
            j += 1;
        }
        if j > n {
            break;
        }
        windows.push(IbiWindow {
            start: i,
            end: j,
            start_ms,
            end_ms: t[j - 1],
        });
    }
    if windows.is_empty() {
        return Err(Error::InsufficientData(format!(
            "series spans {:.3} s, shorter than one {length_s} s window",
            series.duration_ms() / 1000.0
        )));
    }
    Ok(windows)
}

/// One EDA window: a half-open sample range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleWindow {
    pub start: usize,
    pub end: usize,
}

/// Enumerate fixed-length sample windows of `length_s` seconds advancing by
/// `step` samples.
///
/// # Errors
/// * [`Error::Parameter`] for a non-positive length or a zero step.
/// * [`Error::InsufficientData`] if fewer samples exist than one window.
pub fn sample_windows(
    n_samples: usize,
    sample_rate_hz: f64,
    length_s: f64,
    step: usize,
) -> Result<Vec<SampleWindow>> {
    if !(length_s.is_finite() && length_s > 0.0) {
        return Err(Error::Parameter(format!(
            "window length must be positive and finite, got {length_s}"
        )));
    }
    if step == 0 {
        return Err(Error::Parameter(
            "window step must be at least 1 sample".into(),
        ));
    }
    let width = ((length_s * sample_rate_hz).round() as usize).max(1);
    if width > n_samples {
        return Err(Error::InsufficientData(format!(
            "recording has {n_samples} samples, shorter than one {length_s} s window ({width} samples)"
        )));
    }
    let mut windows = Vec::new();
    let mut start = 0usize;
    while start + width <= n_samples {
        windows.push(SampleWindow {
            start,
            end: start + width,
        });
        start += step;
    }
    Ok(windows)
}
