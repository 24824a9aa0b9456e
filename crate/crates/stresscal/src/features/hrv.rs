//! Time-domain, relative-RR, and Poincaré HRV features.
//!
//! All standard deviations are population (`1/n`) moments, which makes the
//! documented algebraic identities (`RMSSD² = SDSD² + mean(diff)²`,
//! `SD1² + SD2² = 2·SDRR²`) hold exactly rather than approximately.

use log::warn;

use crate::error::{Error, Result};
use crate::stats;

/// Time-domain statistics of the inter-beat intervals in one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HrvTimeFeatures {
    pub mean_rr: f64,
    pub median_rr: f64,
    pub sdrr: f64,
    pub skew_rr: f64,
    pub kurt_rr: f64,
    pub rmssd: f64,
    pub sdsd: f64,
    /// `SDRR / RMSSD`; 0 by convention when `RMSSD` is 0.
    pub sdrr_rmssd: f64,
    /// Percentage of successive differences strictly exceeding 25 ms.
    pub pnn25: f64,
    /// Percentage of successive differences strictly exceeding 50 ms.
    pub pnn50: f64,
}

/// Compute the time-domain block of the feature vector.
///
/// # Errors
/// [`Error::InsufficientData`] for windows with fewer than 3 intervals.
pub fn hrv_time_features(intervals: &[f64]) -> Result<HrvTimeFeatures> {
    if intervals.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "time-domain HRV features need at least 3 intervals, got {}",
            intervals.len()
        )));
    }
    let d = stats::diffs(intervals);
    let rmssd = stats::rms(&d);
    let sdrr = stats::std_pop(intervals);
    Ok(HrvTimeFeatures {
        mean_rr: stats::mean(intervals),
        median_rr: stats::median(intervals),
        sdrr,
        skew_rr: stats::skewness_pop(intervals),
        kurt_rr: stats::excess_kurtosis_pop(intervals),
        rmssd,
        sdsd: stats::std_pop(&d),
        sdrr_rmssd: if rmssd == 0.0 { 0.0 } else { sdrr / rmssd },
        pnn25: pnn(&d, 25.0),
        pnn50: pnn(&d, 50.0),
    })
}

/// Percentage of |successive difference| strictly greater than
/// `threshold_ms`.
fn pnn(diffs: &[f64], threshold_ms: f64) -> f64 {
    if diffs.is_empty() {
        return 0.0;
    }
    let over = diffs.iter().filter(|d| d.abs() > threshold_ms).count();
    100.0 * over as f64 / diffs.len() as f64
}

/// The relative-RR series: `rel_i = 2 (RR_i − RR_{i−1}) / (RR_i + RR_{i−1})`
/// for consecutive interval pairs, length `N − 1`.
///
/// # Errors
/// [`Error::InsufficientData`] for fewer than 2 intervals.
pub fn relative_rr(intervals: &[f64]) -> Result<Vec<f64>> {
    if intervals.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "relative RR needs at least 2 intervals, got {}",
            intervals.len()
        )));
    }
    Ok(intervals
        .windows(2)
        .map(|w| 2.0 * (w[1] - w[0]) / (w[1] + w[0]))
        .collect())
}

/// Time-domain statistics of the relative-RR series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeRrFeatures {
    pub mean: f64,
    pub median: f64,
    pub sdrr: f64,
    pub rmssd: f64,
    pub sdsd: f64,
    pub skew: f64,
    pub kurt: f64,
}

/// Compute the relative-RR block: the same seven statistics the time-domain
/// block uses, applied to the derived series.
///
/// # Errors
/// As [`relative_rr`].
pub fn relative_rr_features(intervals: &[f64]) -> Result<RelativeRrFeatures> {
    let rel = relative_rr(intervals)?;
    let d = stats::diffs(&rel);
    Ok(RelativeRrFeatures {
        mean: stats::mean(&rel),
        median: stats::median(&rel),
        sdrr: stats::std_pop(&rel),
        rmssd: stats::rms(&d),
        sdsd: stats::std_pop(&d),
        skew: stats::skewness_pop(&rel),
        kurt: stats::excess_kurtosis_pop(&rel),
    })
}

/// Poincaré-plot descriptors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareFeatures {
    pub sd1: f64,
    pub sd2: f64,
}

/// `SD1 = SDSD/√2`, `SD2 = √(2·SDRR² − SDSD²/2)`, population moments.
/// A (numerically) negative radicand is clamped to zero with a warning.
///
/// # Errors
/// [`Error::InsufficientData`] for fewer than 3 intervals.
pub fn poincare_descriptors(intervals: &[f64]) -> Result<PoincareFeatures> {
    if intervals.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "Poincaré descriptors need at least 3 intervals, got {}",
            intervals.len()
        )));
    }
    let sdrr = stats::std_pop(intervals);
    let sdsd = stats::std_pop(&stats::diffs(intervals));
    let sd1 = sdsd / std::f64::consts::SQRT_2;
    let radicand = 2.0 * sdrr * sdrr - sdsd * sdsd / 2.0;
    let sd2 = if radicand < 0.0 {
        warn!("SD2 radicand {radicand:e} clamped to 0");
        0.0
    } else {
        radicand.sqrt()
    };
    Ok(PoincareFeatures { sd1, sd2 })
}
