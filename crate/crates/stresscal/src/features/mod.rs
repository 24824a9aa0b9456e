//! The feature inventory: 23 HRV features (time-domain, relative-RR,
//! Poincaré, frequency-domain) and 22 EDA features (conductance statistics,
//! derivatives, SCR event amplitudes, SCR shape summaries) computed over
//! sliding windows.

mod eda;
mod extract;
mod freq;
mod hrv;
mod window;

pub use eda::{eda_features, EdaFeatures};
pub use extract::{
    extract_feature_table, ConditionSpan, ExtractOptions, ExtractOutput, SubjectLog,
    SubjectRecording,
};
pub use freq::{
    hrv_frequency_features, hrv_frequency_features_in, FrequencyBands, FrequencyFeatures, HF_BAND,
    LF_BAND, RESAMPLE_RATE_HZ, VLF_BAND,
};
pub use hrv::{
    hrv_time_features, poincare_descriptors, relative_rr, relative_rr_features, HrvTimeFeatures,
    PoincareFeatures, RelativeRrFeatures,
};
pub use window::{ibi_windows, sample_windows, IbiWindow, SampleWindow, WindowSpec, WindowStep};

use crate::error::Result;

/// Canonical HRV feature order; every HRV table column layout follows it.
pub const HRV_FEATURE_NAMES: [&str; 23] = [
    "MEAN_RR",
    "MEDIAN_RR",
    "SDRR",
    "SKEW_RR",
    "KURT_RR",
    "RMSSD",
    "SDSD",
    "SDRR_RMSSD",
    "pNN25",
    "pNN50",
    "SD1",
    "SD2",
    "REL_RR_MEAN",
    "REL_RR_MEDIAN",
    "REL_RR_SDRR",
    "REL_RR_RMSSD",
    "REL_RR_SDSD",
    "REL_RR_SKEW",
    "REL_RR_KURT",
    "VLF",
    "LF",
    "HF",
    "LF_HF",
];

/// Canonical EDA feature order.
pub const EDA_FEATURE_NAMES: [&str; 22] = [
    "MEAN_SC",
    "MAX_SC",
    "MIN_SC",
    "RANGE_SC",
    "KURT_SC",
    "SKEW_SC",
    "MEAN_D1",
    "STD_D1",
    "MEAN_D2",
    "STD_D2",
    "PEAK_MEAN",
    "PEAK_MAX",
    "PEAK_MIN",
    "PEAK_STD",
    "ONSET_MEAN",
    "ONSET_MAX",
    "ONSET_MIN",
    "ONSET_STD",
    "ALSC",
    "INSC",
    "APSC",
    "RMSC",
];

/// Assemble the full 23-value HRV vector for one window, in
/// [`HRV_FEATURE_NAMES`] order.
///
/// # Errors
/// The union of the block preconditions: at least 3 intervals and a span of
/// at least 300 s.
pub fn hrv_feature_vector(intervals: &[f64]) -> Result<Vec<f64>> {
    hrv_feature_vector_in(intervals, &FrequencyBands::default())
}

/// [`hrv_feature_vector`] with caller-chosen spectral bands.
///
/// # Errors
/// As [`hrv_feature_vector`], plus [`crate::Error::Parameter`] for invalid
/// bands.
pub fn hrv_feature_vector_in(intervals: &[f64], bands: &FrequencyBands) -> Result<Vec<f64>> {
    let time = hrv_time_features(intervals)?;
    let rel = relative_rr_features(intervals)?;
    let poincare = poincare_descriptors(intervals)?;
    let freq = hrv_frequency_features_in(intervals, bands)?;
    Ok(vec![
        time.mean_rr,
        time.median_rr,
        time.sdrr,
        time.skew_rr,
        time.kurt_rr,
        time.rmssd,
        time.sdsd,
        time.sdrr_rmssd,
        time.pnn25,
        time.pnn50,
        poincare.sd1,
        poincare.sd2,
        rel.mean,
        rel.median,
        rel.sdrr,
        rel.rmssd,
        rel.sdsd,
        rel.skew,
        rel.kurt,
        freq.vlf,
        freq.lf,
        freq.hf,
        freq.lf_hf,
    ])
}

/// Assemble the full 22-value EDA vector for one window, in
/// [`EDA_FEATURE_NAMES`] order.
///
/// # Errors
/// As [`eda_features`].
pub fn eda_feature_vector(
    samples: &[f64],
    sample_rate_hz: f64,
    onset_amplitudes: &[f64],
    peak_amplitudes: &[f64],
) -> Result<Vec<f64>> {
    let f = eda_features(samples, sample_rate_hz, onset_amplitudes, peak_amplitudes)?;
    Ok(vec![
        f.mean_sc,
        f.max_sc,
        f.min_sc,
        f.range_sc,
        f.kurt_sc,
        f.skew_sc,
        f.mean_d1,
        f.std_d1,
        f.mean_d2,
        f.std_d2,
        f.peak_mean,
        f.peak_max,
        f.peak_min,
        f.peak_std,
        f.onset_mean,
        f.onset_max,
        f.onset_min,
        f.onset_std,
        f.alsc,
        f.insc,
        f.apsc,
        f.rmsc,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_lengths_match_the_name_inventories() {
        let intervals: Vec<f64> = (0..400)
            .map(|i| 950.0 + 60.0 * ((i as f64) * 0.37).sin())
            .collect();
        let hrv = hrv_feature_vector(&intervals).unwrap();
        assert_eq!(hrv.len(), HRV_FEATURE_NAMES.len());

        let eda = eda_feature_vector(&[1.0, 1.5, 2.0, 1.2], 4.0, &[1.0], &[2.0]).unwrap();
        assert_eq!(eda.len(), EDA_FEATURE_NAMES.len());
    }

    #[test]
    fn emitted_vectors_satisfy_the_range_invariants() {
        let intervals: Vec<f64> = (0..400)
            .map(|i| 900.0 + 80.0 * ((i as f64) * 0.73).sin() + (i % 7) as f64)
            .collect();
        let hrv = hrv_feature_vector(&intervals).unwrap();
        assert!(hrv.iter().all(|v| v.is_finite()), "all values finite");
        let idx = |name: &str| HRV_FEATURE_NAMES.iter().position(|n| *n == name).unwrap();
        for name in ["SDRR", "RMSSD", "SDSD", "SD1", "SD2", "VLF", "LF", "HF"] {
            assert!(hrv[idx(name)] >= 0.0, "{name} must be nonnegative");
        }
        for name in ["pNN25", "pNN50"] {
            let v = hrv[idx(name)];
            assert!((0.0..=100.0).contains(&v), "{name} = {v} out of range");
        }
        assert!(hrv[idx("pNN25")] >= hrv[idx("pNN50")]);

        let eda = eda_feature_vector(&[0.4, -0.2, 0.9, 0.1], 4.0, &[], &[]).unwrap();
        assert!(eda.iter().all(|v| v.is_finite()));
        let eidx = |name: &str| EDA_FEATURE_NAMES.iter().position(|n| *n == name).unwrap();
        for name in ["ALSC", "INSC", "APSC", "RMSC"] {
            assert!(eda[eidx(name)] >= 0.0, "{name} must be nonnegative");
        }
        assert!(eda[eidx("ALSC")] >= 3.0, "ALSC at least N-1");
    }

    #[test]
    fn feature_names_are_unique() {
        let mut hrv = HRV_FEATURE_NAMES.to_vec();
        hrv.sort_unstable();
        hrv.dedup();
        assert_eq!(hrv.len(), HRV_FEATURE_NAMES.len());
        let mut eda = EDA_FEATURE_NAMES.to_vec();
        eda.sort_unstable();
        eda.dedup();
        assert_eq!(eda.len(), EDA_FEATURE_NAMES.len());
    }
}
