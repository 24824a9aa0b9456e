//! Skin-conductance-response (SCR) event detection.
//!
//! An onset fires where the first derivative of the (already denoised)
//! conductance crosses above a slope threshold after having been at or
//! below it; the paired peak is the next local maximum of the signal. A
//! trailing onset whose peak never materializes before the recording ends
//! is discarded, so onsets and peaks always come in strictly interleaved
//! pairs.

use crate::dataio::{SignalKind, SignalRecording};
use crate::error::{Error, Result};

/// Default onset slope threshold, microsiemens per second.
pub const DEFAULT_SCR_THRESHOLD_US_PER_S: f64 = 0.01;

/// One detected onset or peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScrEvent {
    /// Sample index in the source recording.
    pub index: usize,
    /// Event time in seconds from the start of the recording.
    pub time_s: f64,
    /// Conductance at the event sample, microsiemens.
    pub conductance: f64,
}

/// Paired SCR onsets and peaks, index-aligned (`onsets[i]` precedes
/// `peaks[i]`, which precedes `onsets[i + 1]`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScrEventList {
    pub onsets: Vec<ScrEvent>,
    pub peaks: Vec<ScrEvent>,
}

impl ScrEventList {
    pub fn len(&self) -> usize {
        self.onsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.onsets.is_empty()
    }
}

/// Detect SCR onset/peak pairs in a denoised EDA recording.
///
/// `threshold_us_per_s` is the slope an onset must exceed (strictly); pass
/// [`DEFAULT_SCR_THRESHOLD_US_PER_S`] for the standard setting.
///
/// # Errors
/// * [`Error::Parameter`] if the recording is not EDA or the threshold is
///   not positive and finite.
///
/// A recording with no qualifying events yields an empty list, not an
/// error.
pub fn detect_scr_events(eda: &SignalRecording, threshold_us_per_s: f64) -> Result<ScrEventList> {
    if eda.kind() != SignalKind::Eda {
        return Err(Error::Parameter(format!(
            "SCR detection expects an EDA recording, got {}",
            eda.kind()
        )));
    }
    if !(threshold_us_per_s.is_finite() && threshold_us_per_s > 0.0) {
        return Err(Error::Parameter(format!(
            "SCR threshold must be positive and finite, got {threshold_us_per_s}"
        )));
    }

    let x = eda.samples();
    let fs = eda.sample_rate_hz();
    if x.len() < 3 {
        return Ok(ScrEventList::default());
    }
    // Forward-difference slope in physical units (microsiemens / second).
    let slope: Vec<f64> = x.windows(2).map(|w| (w[1] - w[0]) * fs).collect();

    let mut events = ScrEventList::default();
    let mut n = 1usize;
    while n < slope.len() {
        let crossed = slope[n] > threshold_us_per_s && slope[n - 1] <= threshold_us_per_s;
        if !crossed {
            n += 1;
            continue;
        }
        let onset = n;
        // Climb to the apex: advance while the signal is non-decreasing.
        let mut m = onset;
        while m + 1 < x.len() && x[m + 1] >= x[m] {
            m += 1;
        }
        if m + 1 == x.len() {
            // The rise never turned over before the recording ended; drop
            // the unpaired onset.
            break;
        }
        events.onsets.push(ScrEvent {
            index: onset,
            time_s: onset as f64 / fs,
            conductance: x[onset],
        });
        events.peaks.push(ScrEvent {
            index: m,
            time_s: m as f64 / fs,
            conductance: x[m],
        });
        // Resume the scan after the peak so events stay interleaved.
        n = m + 1;
    }
    Ok(events)
}
