//! EDA feature block: conductance statistics, discrete-derivative moments,
//! SCR event-amplitude statistics, and the four SCR shape summaries
//! (arc length, integral, normalized average power, and its root).

use crate::error::{Error, Result};
use crate::stats;

/// The 22 EDA features of one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdaFeatures {
    pub mean_sc: f64,
    pub max_sc: f64,
    pub min_sc: f64,
    pub range_sc: f64,
    pub kurt_sc: f64,
    pub skew_sc: f64,
    pub mean_d1: f64,
    pub std_d1: f64,
    pub mean_d2: f64,
    pub std_d2: f64,
    pub peak_mean: f64,
    pub peak_max: f64,
    pub peak_min: f64,
    pub peak_std: f64,
    pub onset_mean: f64,
    pub onset_max: f64,
    pub onset_min: f64,
    pub onset_std: f64,
    /// Arc length: Σ √(1 + (`r[n]` − `r[n−1]`)²).
    pub alsc: f64,
    /// Integral: Σ |`r[n]`|.
    pub insc: f64,
    /// Normalized average power: (1/N) Σ `r[n]`².
    pub apsc: f64,
    /// √APSC.
    pub rmsc: f64,
}

fn event_stats(amplitudes: &[f64]) -> (f64, f64, f64, f64) {
    if amplitudes.is_empty() {
        // 0 by convention when the window contains no events.
        return (0.0, 0.0, 0.0, 0.0);
    }
    let max = amplitudes.iter().cloned().fold(f64::MIN, f64::max);
    let min = amplitudes.iter().cloned().fold(f64::MAX, f64::min);
    (
        stats::mean(amplitudes),
        max,
        min,
        stats::std_pop(amplitudes),
    )
}

/// Compute the EDA feature block for one window.
///
/// `onset_amplitudes` / `peak_amplitudes` are the conductances of the SCR
/// events whose indices fall inside the window.
///
/// # Errors
/// * [`Error::EmptyInput`] for an empty window.
/// * [`Error::Parameter`] for a non-positive sample rate.
pub fn eda_features(
    samples: &[f64],
    sample_rate_hz: f64,
    onset_amplitudes: &[f64],
    peak_amplitudes: &[f64],
) -> Result<EdaFeatures> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("EDA window".into()));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::Parameter(format!(
            "sample rate must be positive and finite, got {sample_rate_hz}"
        )));
    }

    let max_sc = samples.iter().cloned().fold(f64::MIN, f64::max);
    let min_sc = samples.iter().cloned().fold(f64::MAX, f64::min);

    // Physical-unit derivatives (µS/s); the SCR shape features below use
    // the raw unscaled differences instead, per their definitions.
    let d1: Vec<f64> = stats::diffs(samples)
        .into_iter()
        .map(|d| d * sample_rate_hz)
        .collect();
    let d2: Vec<f64> = stats::diffs(&d1)
        .into_iter()
        .map(|d| d * sample_rate_hz)
        .collect();

    let (peak_mean, peak_max, peak_min, peak_std) = event_stats(peak_amplitudes);
    let (onset_mean, onset_max, onset_min, onset_std) = event_stats(onset_amplitudes);

    let alsc = samples
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            (1.0 + d * d).sqrt()
        })
        .sum();
    let apsc = samples.iter().map(|r| r * r).sum::<f64>() / samples.len() as f64;

    Ok(EdaFeatures {
        mean_sc: stats::mean(samples),
        max_sc,
        min_sc,
        range_sc: max_sc - min_sc,
        kurt_sc: stats::excess_kurtosis_pop(samples),
        skew_sc: stats::skewness_pop(samples),
        mean_d1: stats::mean(&d1),
        std_d1: stats::std_pop(&d1),
        mean_d2: stats::mean(&d2),
        std_d2: stats::std_pop(&d2),
        peak_mean,
        peak_max,
        peak_min,
        peak_std,
        onset_mean,
        onset_max,
        onset_min,
        onset_std,
        alsc,
        insc: samples.iter().map(|r| r.abs()).sum(),
        apsc,
        rmsc: apsc.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scr_shape_features_match_hand_oracles() {
        let f = eda_features(&[1.0, -2.0, 3.0], 4.0, &[], &[]).unwrap();
        assert!((f.insc - 6.0).abs() < 1e-12);
        assert!((f.apsc - 14.0 / 3.0).abs() < 1e-12);
        assert!((f.rmsc - (14.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((f.rmsc - 2.160246899469287).abs() < 1e-12);
        assert!((f.apsc - f.rmsc * f.rmsc).abs() < 1e-12);
    }

    #[test]
    fn arc_length_hand_oracle() {
        let f = eda_features(&[0.0, 1.0, 3.0], 4.0, &[], &[]).unwrap();
        let expected = 2.0f64.sqrt() + 5.0f64.sqrt();
        assert!((f.alsc - expected).abs() < 1e-12);
        assert!((f.alsc - 3.650281539872885).abs() < 1e-12);
    }

    #[test]
    fn constant_window_arc_length_is_n_minus_one() {
        let f = eda_features(&[2.0; 9], 4.0, &[], &[]).unwrap();
        assert!((f.alsc - 8.0).abs() < 1e-12);
        assert!(f.alsc >= 8.0, "ALSC is bounded below by N-1");
    }

    #[test]
    fn derivative_statistics_in_physical_units() {
        // Samples [1, 3, 6] at 2 Hz: d1 = [4, 6] µS/s, d2 = [4] µS/s².
        let f = eda_features(&[1.0, 3.0, 6.0], 2.0, &[], &[]).unwrap();
        assert!((f.mean_d1 - 5.0).abs() < 1e-12);
        assert!((f.std_d1 - 1.0).abs() < 1e-12);
        assert!((f.mean_d2 - 4.0).abs() < 1e-12);
        assert_eq!(f.std_d2, 0.0);
    }

    #[test]
    fn time_statistics_and_range() {
        let f = eda_features(&[1.0, 4.0, 2.0, 3.0], 4.0, &[], &[]).unwrap();
        assert!((f.mean_sc - 2.5).abs() < 1e-12);
        assert_eq!(f.max_sc, 4.0);
        assert_eq!(f.min_sc, 1.0);
        assert_eq!(f.range_sc, 3.0);
    }

    #[test]
    fn event_statistics_use_zero_convention_when_absent() {
        let none = eda_features(&[1.0, 2.0], 4.0, &[], &[]).unwrap();
        assert_eq!(
            (none.peak_mean, none.peak_max, none.peak_min, none.peak_std),
            (0.0, 0.0, 0.0, 0.0)
        );
        let some = eda_features(&[1.0, 2.0], 4.0, &[0.5, 1.5], &[2.0, 4.0]).unwrap();
        assert!((some.onset_mean - 1.0).abs() < 1e-12);
        assert_eq!(some.onset_max, 1.5);
        assert_eq!(some.onset_min, 0.5);
        assert!((some.onset_std - 0.5).abs() < 1e-12);
        assert!((some.peak_mean - 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_window_is_rejected() {
        assert!(matches!(
            eda_features(&[], 4.0, &[], &[]),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            eda_features(&[1.0], 0.0, &[], &[]),
            Err(Error::Parameter(_))
        ));
    }
}
