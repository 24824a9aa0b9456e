//! R-peak detection on raw ECG, in the spirit of Pan-Tompkins.
//!
//! Pipeline: zero-phase 5-15 Hz band-pass (to isolate QRS energy), squaring,
//! a ~150 ms moving-window integration, and an adaptive threshold at half
//! the local running maximum. Peaks closer together than a 200 ms refractory
//! period are merged (the stronger one wins), and the resulting inter-beat
//! intervals are screened against physiological bounds before the series is
//! rebuilt from the survivors.

use log::warn;

use crate::dataio::{SignalKind, SignalRecording};
use crate::error::{Error, Result};
use crate::signal::filter::{butterworth_highpass, butterworth_lowpass, smooth_moving_average};
use crate::signal::IbiSeries;

/// QRS band-pass edges (Hz).
const BAND_LOW_HZ: f64 = 5.0;
const BAND_HIGH_HZ: f64 = 15.0;
/// Width of the moving-window integration, seconds.
const INTEGRATION_WINDOW_S: f64 = 0.150;
/// Fraction of the local running maximum used as detection threshold.
const THRESHOLD_FRACTION: f64 = 0.5;
/// Width of the running-maximum window, seconds.
const RUNNING_MAX_WINDOW_S: f64 = 2.0;
/// Threshold floor as a fraction of the global integrated maximum. In
/// stretches holding no beat (quiet tails, leads off) the local maximum is
/// pure noise and half of it would still fire; no plausible QRS carries
/// less than a twentieth of the strongest one's energy.
const NOISE_FLOOR_FRACTION: f64 = 0.05;
/// Minimum spacing between two accepted peaks, seconds.
const REFRACTORY_S: f64 = 0.200;

/// Shortest physiologically plausible inter-beat interval (200 bpm).
pub const MIN_PLAUSIBLE_RR_MS: f64 = 300.0;
/// Longest physiologically plausible inter-beat interval (30 bpm).
pub const MAX_PLAUSIBLE_RR_MS: f64 = 2000.0;

/// Sliding maximum over a centered window, O(n) via a monotonic deque.
fn running_max(x: &[f64], width: usize) -> Vec<f64> {
    let n = x.len();
    let half_left = (width - 1) / 2;
    let half_right = width / 2;
    let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    let mut out = Vec::with_capacity(n);
    let mut next_in = 0usize;
    for i in 0..n {
        let hi = (i + half_right).min(n - 1);
        while next_in <= hi {
            while let Some(&back) = deque.back() {
                if x[back] <= x[next_in] {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(next_in);
            next_in += 1;
        }
        let lo = i.saturating_sub(half_left);
        while let Some(&front) = deque.front() {
            if front < lo {
                deque.pop_front();
            } else {
                break;
            }
        }
        out.push(x[*deque.front().expect("window is never empty")]);
    }
    out
}

/// Detect R-peak sample indices in a raw ECG recording.
///
/// # Errors
/// * [`Error::Parameter`] if the recording is not ECG or its sample rate is
///   too low to resolve the 5-15 Hz QRS band.
/// * [`Error::InsufficientSignal`] if fewer than two peaks are found.
pub fn detect_r_peak_samples(ecg: &SignalRecording) -> Result<Vec<usize>> {
    if ecg.kind() != SignalKind::Ecg {
        return Err(Error::Parameter(format!(
            "R-peak detection expects an ECG recording, got {}",
            ecg.kind()
        )));
    }
    let fs = ecg.sample_rate_hz();
    if BAND_HIGH_HZ >= fs / 2.0 {
        return Err(Error::Parameter(format!(
            "sample rate {fs} Hz is too low for a {BAND_LOW_HZ}-{BAND_HIGH_HZ} Hz QRS band-pass"
        )));
    }

    // Zero-phase band-pass keeps each QRS complex centered on its R peak.
    let highpass = butterworth_highpass(BAND_LOW_HZ, 2, fs)?;
    let lowpass = butterworth_lowpass(BAND_HIGH_HZ, 2, fs)?;
    let band = lowpass.filtfilt(&highpass.filtfilt(ecg.samples()));

    let squared: Vec<f64> = band.iter().map(|v| v * v).collect();
    let integrated =
        smooth_moving_average(&ecg.with_samples(squared.clone())?, INTEGRATION_WINDOW_S)?;
    let integrated = integrated.samples();

    let max_width = ((RUNNING_MAX_WINDOW_S * fs).round() as usize).max(1);
    let local_max = running_max(integrated, max_width);
    let global_max = integrated.iter().copied().fold(0.0_f64, f64::max);
    let floor = NOISE_FLOOR_FRACTION * global_max;

    // Contiguous runs above the adaptive threshold; one candidate per run,
    // located at the sharpest point of the squared signal.
    let mut candidates: Vec<usize> = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..=integrated.len() {
        let above = i < integrated.len() && {
            let thr = (THRESHOLD_FRACTION * local_max[i]).max(floor);
            integrated[i] > thr && integrated[i] > 0.0
        };
        match (above, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(start)) => {
                let peak = (start..i)
                    .max_by(|&a, &b| {
                        squared[a]
                            .partial_cmp(&squared[b])
                            .expect("squared signal is finite")
                            .then(b.cmp(&a)) // prefer the earliest on ties
                    })
                    .expect("run is non-empty");
                candidates.push(peak);
                run_start = None;
            }
            _ => {}
        }
    }

    // Refractory screening: within 200 ms, keep the stronger candidate.
    let refractory = REFRACTORY_S * fs;
    let mut peaks: Vec<usize> = Vec::with_capacity(candidates.len());
    for c in candidates {
        match peaks.last().copied() {
            Some(prev) if ((c - prev) as f64) < refractory => {
                if squared[c] > squared[prev] {
                    *peaks.last_mut().expect("non-empty") = c;
                }
            }
            _ => peaks.push(c),
        }
    }

    if peaks.len() < 2 {
        return Err(Error::InsufficientSignal(format!(
            "found {} R peak(s); at least 2 are required to form an interval",
            peaks.len()
        )));
    }
    Ok(peaks)
}

/// Detect R peaks and convert them to an inter-beat-interval series.
///
/// Intervals outside `[MIN_PLAUSIBLE_RR_MS, MAX_PLAUSIBLE_RR_MS]` are
/// excluded with a warning, and beat times are recomputed from the
/// surviving intervals.
///
/// # Errors
/// Everything [`detect_r_peak_samples`] raises, plus
/// [`Error::InsufficientSignal`] when no plausible interval survives.
pub fn detect_r_peaks(ecg: &SignalRecording) -> Result<IbiSeries> {
    let peaks = detect_r_peak_samples(ecg)?;
    let fs = ecg.sample_rate_hz();
    let mut intervals = Vec::with_capacity(peaks.len() - 1);
    let mut dropped = 0usize;
    for pair in peaks.windows(2) {
        let rr_ms = (pair[1] - pair[0]) as f64 * 1000.0 / fs;
        if (MIN_PLAUSIBLE_RR_MS..=MAX_PLAUSIBLE_RR_MS).contains(&rr_ms) {
            intervals.push(rr_ms);
        } else {
            dropped += 1;
        }
    }
    if dropped > 0 {
        warn!(
            "excluded {dropped} implausible inter-beat interval(s) outside \
             [{MIN_PLAUSIBLE_RR_MS}, {MAX_PLAUSIBLE_RR_MS}] ms"
        );
    }
    if intervals.is_empty() {
        return Err(Error::InsufficientSignal(
            "no physiologically plausible inter-beat interval survived screening".into(),
        ));
    }
    IbiSeries::from_intervals(intervals)
}
