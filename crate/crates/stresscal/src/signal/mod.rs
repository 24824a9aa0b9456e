//! Raw-signal processing: Butterworth smoothing, R-peak detection on ECG,
//! and skin-conductance-response (SCR) event detection on EDA.
//!
//! Everything here is deterministic and purely functional: the same samples
//! in give the same beats/events out, with no hidden state.

mod filter;
mod rpeaks;
mod scr;

pub use filter::{
    butterworth_highpass, butterworth_lowpass, denoise_eda, lowpass_filtfilt,
    smooth_moving_average, FilterSpec, SosFilter,
};
pub use rpeaks::{detect_r_peak_samples, detect_r_peaks, MAX_PLAUSIBLE_RR_MS, MIN_PLAUSIBLE_RR_MS};
pub use scr::{detect_scr_events, ScrEvent, ScrEventList, DEFAULT_SCR_THRESHOLD_US_PER_S};

use crate::error::{Error, Result};

/// A sequence of inter-beat intervals (milliseconds) with cumulative beat
/// times.
///
/// `t_ms[i]` is the time of the beat that *ends* interval `i`, measured from
/// the beat that starts the series (so `t_ms[i] = intervals[0] + ... +
/// intervals[i]`). Intervals are strictly positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct IbiSeries {
    intervals_ms: Vec<f64>,
    t_ms: Vec<f64>,
}

impl IbiSeries {
    /// Build a series from raw intervals in milliseconds.
    ///
    /// # Errors
    /// * [`Error::EmptyInput`] if `intervals_ms` is empty.
    /// * [`Error::Parameter`] if any interval is non-finite or not positive.
    pub fn from_intervals(intervals_ms: Vec<f64>) -> Result<Self> {
        if intervals_ms.is_empty() {
            return Err(Error::EmptyInput("inter-beat interval series".into()));
        }
        if let Some(i) = intervals_ms
            .iter()
            .position(|v| !(v.is_finite() && *v > 0.0))
        {
            return Err(Error::Parameter(format!(
                "inter-beat interval at index {i} must be positive and finite, got {}",
                intervals_ms[i]
            )));
        }
        let mut t_ms = Vec::with_capacity(intervals_ms.len());
        let mut acc = 0.0;
        for &iv in &intervals_ms {
            acc += iv;
            t_ms.push(acc);
        }
        Ok(Self { intervals_ms, t_ms })
    }

    pub fn intervals_ms(&self) -> &[f64] {
        &self.intervals_ms
    }

    /// Cumulative beat times; see the type-level docs for the convention.
    pub fn t_ms(&self) -> &[f64] {
        &self.t_ms
    }

    pub fn len(&self) -> usize {
        self.intervals_ms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals_ms.is_empty()
    }

    /// Total duration covered by the intervals, in milliseconds.
    pub fn duration_ms(&self) -> f64 {
        *self.t_ms.last().expect("series is never empty")
    }

    /// Time at which interval `i` starts (0 for the first interval).
    pub fn start_of(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.t_ms[i - 1]
        }
    }
}
