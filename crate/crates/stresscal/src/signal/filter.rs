//! Butterworth IIR filters (cascaded biquads) with zero-phase application,
//! plus a centered moving-average smoother.
//!
//! Designs use the bilinear transform with frequency prewarping. Zero-phase
//! filtering runs the cascade forward and backward over an odd-reflection
//! padded signal, seeding each biquad with its steady-state response to the
//! first padded sample so constant signals pass through exactly.

use rustfft::num_complex::Complex64;

use crate::dataio::SignalRecording;
use crate::error::{Error, Result};

/// Smoothing parameters shared by the EDA preprocessing chain.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpec {
    /// Low-pass cutoff in Hz.
    pub cutoff_hz: f64,
    /// Butterworth order (positive even integer).
    pub order: usize,
    /// Width of the post-filter moving average, in seconds.
    pub smoothing_window_s: f64,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self {
            cutoff_hz: 4.0,
            order: 4,
            smoothing_window_s: 1.0,
        }
    }
}

/// One second-order section in direct form II transposed, with `a0`
/// normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Biquad {
    b0: f64,
    b1: f64,
    b2: f64,
    a1: f64,
    a2: f64,
}

impl Biquad {
    fn dc_gain(&self) -> f64 {
        (self.b0 + self.b1 + self.b2) / (1.0 + self.a1 + self.a2)
    }

    /// Steady-state DF2T state for a constant input `x` (output `g * x`).
    fn steady_state(&self, x: f64) -> (f64, f64) {
        let y = self.dc_gain() * x;
        let s1 = y - self.b0 * x;
        let s2 = self.b2 * x - self.a2 * y;
        (s1, s2)
    }

    fn run(&self, x: &[f64], state: (f64, f64)) -> Vec<f64> {
        let (mut s1, mut s2) = state;
        let mut y = Vec::with_capacity(x.len());
        for &v in x {
            let out = self.b0 * v + s1;
            s1 = self.b1 * v - self.a1 * out + s2;
            s2 = self.b2 * v - self.a2 * out;
            y.push(out);
        }
        y
    }
}

/// A cascade of second-order sections implementing one Butterworth filter.
#[derive(Debug, Clone, PartialEq)]
pub struct SosFilter {
    sections: Vec<Biquad>,
    order: usize,
}

impl SosFilter {
    /// Causal single-pass filtering from rest (zero initial state).
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for section in &self.sections {
            y = section.run(&y, (0.0, 0.0));
        }
        y
    }

    /// Forward pass with each section seeded by its steady-state response to
    /// the first input sample.
    fn filter_from_steady_state(&self, x: &[f64]) -> Vec<f64> {
        if x.is_empty() {
            return Vec::new();
        }
        let mut y = x.to_vec();
        for section in &self.sections {
            let state = section.steady_state(y[0]);
            y = section.run(&y, state);
        }
        y
    }

    /// Zero-phase filtering: odd-reflection pad by 3x the filter order, run
    /// the cascade forward, reverse, run again, reverse, trim the padding.
    ///
    /// A constant input comes back unchanged (to within rounding), and any
    /// input suffers no phase shift — peaks stay where they are.
    pub fn filtfilt(&self, x: &[f64]) -> Vec<f64> {
        if x.is_empty() {
            return Vec::new();
        }
        let pad = (3 * self.order).min(x.len().saturating_sub(1));
        let mut ext = Vec::with_capacity(x.len() + 2 * pad);
        // Odd reflection around the first and last samples suppresses edge
        // transients for trending signals.
        let first = x[0];
        for k in (1..=pad).rev() {
            ext.push(2.0 * first - x[k]);
        }
        ext.extend_from_slice(x);
        let last = x[x.len() - 1];
        for k in 1..=pad {
            ext.push(2.0 * last - x[x.len() - 1 - k]);
        }

        let mut y = self.filter_from_steady_state(&ext);
        y.reverse();
        let mut y = self.filter_from_steady_state(&y);
        y.reverse();
        y[pad..pad + x.len()].to_vec()
    }

    /// Gain at 0 Hz; analytically 1 for these low-pass designs.
    pub fn dc_gain(&self) -> f64 {
        self.sections.iter().map(Biquad::dc_gain).product()
    }

    /// Single-pass magnitude response at `freq_hz` for sampling rate
    /// `sample_rate_hz`. The zero-phase magnitude is this value squared.
    pub fn magnitude_at(&self, freq_hz: f64, sample_rate_hz: f64) -> f64 {
        let w = 2.0 * std::f64::consts::PI * freq_hz / sample_rate_hz;
        let z1 = Complex64::from_polar(1.0, -w);
        let z2 = z1 * z1;
        self.sections
            .iter()
            .map(|s| {
                let num = Complex64::new(s.b0, 0.0) + z1 * s.b1 + z2 * s.b2;
                let den = Complex64::new(1.0, 0.0) + z1 * s.a1 + z2 * s.a2;
                (num / den).norm()
            })
            .product()
    }
}

fn validate_design(cutoff_hz: f64, order: usize, sample_rate_hz: f64) -> Result<()> {
    if !(cutoff_hz.is_finite() && cutoff_hz > 0.0) {
        return Err(Error::Parameter(format!(
            "cutoff must be positive and finite, got {cutoff_hz}"
        )));
    }
    if order == 0 || !order.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "filter order must be a positive even integer, got {order}"
        )));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::Parameter(format!(
            "sample rate must be positive and finite, got {sample_rate_hz}"
        )));
    }
    if cutoff_hz >= sample_rate_hz / 2.0 {
        return Err(Error::Parameter(format!(
            "cutoff {cutoff_hz} Hz must lie below the Nyquist frequency {} Hz",
            sample_rate_hz / 2.0
        )));
    }
    Ok(())
}

/// Butterworth pole-pair coefficients: the analog prototype denominator of
/// pair `k` is `s^2 + c_k s + 1` with `c_k = 2 cos((2k+1)π / (2n))`.
fn pair_coefficients(order: usize) -> Vec<f64> {
    (0..order / 2)
        .map(|k| 2.0 * ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * order) as f64).cos())
        .collect()
}

/// Design a low-pass Butterworth filter as cascaded biquads.
///
/// # Errors
/// [`Error::Parameter`] for a non-positive cutoff, an odd or zero order, or
/// a cutoff at/above Nyquist.
pub fn butterworth_lowpass(cutoff_hz: f64, order: usize, sample_rate_hz: f64) -> Result<SosFilter> {
    validate_design(cutoff_hz, order, sample_rate_hz)?;
    let k = 2.0 * sample_rate_hz;
    // Prewarp so the digital cutoff lands exactly on the requested frequency.
    let wc = k * (std::f64::consts::PI * cutoff_hz / sample_rate_hz).tan();
    let sections = pair_coefficients(order)
        .into_iter()
        .map(|c| {
            let a0 = k * k + c * wc * k + wc * wc;
            Biquad {
                b0: wc * wc / a0,
                b1: 2.0 * wc * wc / a0,
                b2: wc * wc / a0,
                a1: (2.0 * wc * wc - 2.0 * k * k) / a0,
                a2: (k * k - c * wc * k + wc * wc) / a0,
            }
        })
        .collect();
    Ok(SosFilter { sections, order })
}

/// Design a high-pass Butterworth filter as cascaded biquads.
///
/// # Errors
/// Same conditions as [`butterworth_lowpass`].
pub fn butterworth_highpass(
    cutoff_hz: f64,
    order: usize,
    sample_rate_hz: f64,
) -> Result<SosFilter> {
    validate_design(cutoff_hz, order, sample_rate_hz)?;
    let k = 2.0 * sample_rate_hz;
    let wc = k * (std::f64::consts::PI * cutoff_hz / sample_rate_hz).tan();
    let sections = pair_coefficients(order)
        .into_iter()
        .map(|c| {
            let a0 = k * k + c * wc * k + wc * wc;
            Biquad {
                b0: k * k / a0,
                b1: -2.0 * k * k / a0,
                b2: k * k / a0,
                a1: (2.0 * wc * wc - 2.0 * k * k) / a0,
                a2: (k * k - c * wc * k + wc * wc) / a0,
            }
        })
        .collect();
    Ok(SosFilter { sections, order })
}

/// Zero-phase low-pass an entire recording.
pub fn lowpass_filtfilt(
    recording: &SignalRecording,
    cutoff_hz: f64,
    order: usize,
) -> Result<SignalRecording> {
    let filter = butterworth_lowpass(cutoff_hz, order, recording.sample_rate_hz())?;
    recording.with_samples(filter.filtfilt(recording.samples()))
}

/// Centered moving average with edge truncation: windows that would reach
/// past the ends shrink, and each output is the mean of the available
/// samples only.
///
/// # Errors
/// [`Error::Parameter`] if `window_s` is not positive and finite.
pub fn smooth_moving_average(
    recording: &SignalRecording,
    window_s: f64,
) -> Result<SignalRecording> {
    if !(window_s.is_finite() && window_s > 0.0) {
        return Err(Error::Parameter(format!(
            "smoothing window must be positive and finite, got {window_s}"
        )));
    }
    let x = recording.samples();
    let width = ((window_s * recording.sample_rate_hz()).round() as usize).max(1);
    let n = x.len();
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub((width - 1) / 2);
        let hi = (i + width / 2 + 1).min(n);
        let sum: f64 = x[lo..hi].iter().sum();
        y.push(sum / (hi - lo) as f64);
    }
    recording.with_samples(y)
}

/// Full EDA denoising chain: zero-phase Butterworth low-pass, then a
/// centered moving average.
///
/// When the cutoff sits at or above the Nyquist frequency the recording
/// cannot contain the band the low-pass would remove (common for 4 Hz
/// wrist EDA with the default 4 Hz cutoff), so that stage is skipped and
/// only the moving average applies.
pub fn denoise_eda(recording: &SignalRecording, spec: &FilterSpec) -> Result<SignalRecording> {
    let nyquist = recording.sample_rate_hz() / 2.0;
    let filtered = if spec.cutoff_hz < nyquist {
        lowpass_filtfilt(recording, spec.cutoff_hz, spec.order)?
    } else {
        log::debug!(
            "skipping the {} Hz low-pass: a {} Hz recording is already band-limited",
            spec.cutoff_hz,
            recording.sample_rate_hz()
        );
        recording.clone()
    };
    smooth_moving_average(&filtered, spec.smoothing_window_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::SignalKind;

    #[test]
    fn design_rejects_bad_parameters() {
        assert!(matches!(
            butterworth_lowpass(4.0, 3, 32.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            butterworth_lowpass(4.0, 0, 32.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            butterworth_lowpass(16.0, 4, 32.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            butterworth_lowpass(-1.0, 4, 32.0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn second_order_coefficients_match_the_analog_prototype() {
        // Known Butterworth pair constants: order 2 -> sqrt(2); order 4 ->
        // 0.7654, 1.8478.
        let c2 = pair_coefficients(2);
        assert!((c2[0] - std::f64::consts::SQRT_2).abs() < 1e-12);
        let c4 = pair_coefficients(4);
        assert!((c4[0] - 1.8477590650225735).abs() < 1e-12);
        assert!((c4[1] - 0.7653668647301796).abs() < 1e-12);
    }

    #[test]
    fn lowpass_dc_gain_is_one() {
        let f = butterworth_lowpass(4.0, 4, 256.0).unwrap();
        assert!((f.dc_gain() - 1.0).abs() < 1e-12, "dc gain {}", f.dc_gain());
    }

    #[test]
    fn constant_signal_is_unchanged_by_zero_phase_filtering() {
        let f = butterworth_lowpass(4.0, 4, 32.0).unwrap();
        let x = vec![0.75; 200];
        let y = f.filtfilt(&x);
        assert_eq!(y.len(), x.len());
        for (i, v) in y.iter().enumerate() {
            assert!(
                (v - 0.75).abs() < 1e-9,
                "sample {i} drifted to {v} on a constant input"
            );
        }
    }

    #[test]
    fn stopband_attenuation_of_order_four_design() {
        // A 4th-order low-pass at 4 Hz should be at least 80 dB down by
        // 40 Hz (single pass), and twice that when applied zero-phase.
        let f = butterworth_lowpass(4.0, 4, 256.0).unwrap();
        let g = f.magnitude_at(40.0, 256.0);
        assert!(g < 1e-4, "stopband gain {g} is above -80 dB");
        // And the passband is essentially untouched.
        let p = f.magnitude_at(0.5, 256.0);
        assert!((p - 1.0).abs() < 1e-3, "passband gain {p}");
    }

    #[test]
    fn highpass_blocks_dc_and_passes_high_frequencies() {
        let f = butterworth_highpass(5.0, 2, 128.0).unwrap();
        assert!(f.dc_gain().abs() < 1e-9, "dc gain {}", f.dc_gain());
        let g = f.magnitude_at(20.0, 128.0);
        assert!((g - 1.0).abs() < 0.05, "gain at 20 Hz was {g}");
    }

    #[test]
    fn zero_phase_keeps_a_slow_sine_in_place() {
        // 0.25 Hz sine, cutoff 4 Hz: the tone passes nearly unchanged, with
        // no phase shift, away from the edges.
        let fs = 32.0;
        let f = butterworth_lowpass(4.0, 4, fs).unwrap();
        let x: Vec<f64> = (0..(fs as usize * 40))
            .map(|i| (2.0 * std::f64::consts::PI * 0.25 * i as f64 / fs).sin())
            .collect();
        let y = f.filtfilt(&x);
        let margin = fs as usize * 4;
        for i in margin..x.len() - margin {
            assert!(
                (y[i] - x[i]).abs() < 1e-3,
                "sample {i}: {} vs {}",
                y[i],
                x[i]
            );
        }
    }

    #[test]
    fn moving_average_hand_oracle_with_edge_truncation() {
        let rec =
            SignalRecording::new(SignalKind::Eda, 1.0, vec![0.0, 0.0, 3.0, 0.0, 0.0]).unwrap();
        let y = smooth_moving_average(&rec, 3.0).unwrap();
        // Interior windows average three samples; edges truncate to two.
        assert_eq!(y.samples(), &[0.0, 1.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn moving_average_rejects_bad_window() {
        let rec = SignalRecording::new(SignalKind::Eda, 4.0, vec![1.0; 8]).unwrap();
        assert!(matches!(
            smooth_moving_average(&rec, 0.0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn denoise_chain_preserves_level_of_a_constant_signal() {
        let rec = SignalRecording::new(SignalKind::Eda, 32.0, vec![2.5; 400]).unwrap();
        let out = denoise_eda(&rec, &FilterSpec::default()).unwrap();
        for v in out.samples() {
            assert!((v - 2.5).abs() < 1e-9);
        }
    }
}
