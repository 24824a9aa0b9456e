//! Frequency-domain HRV features: VLF/LF/HF band powers and their ratio.
//!
//! The unevenly spaced tachogram (interval value at the time of the beat
//! closing it) is resampled to a uniform 4 Hz grid with a natural cubic
//! spline, demeaned, and fed to a Welch estimate (120 s Hann segments, 50%
//! overlap). Band powers integrate the one-sided density over half-open
//! bands, so adjacent bands never double-count a bin.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Band edges in Hz (half-open: `lo ≤ f < hi`).
pub const VLF_BAND: (f64, f64) = (0.0033, 0.04);
pub const LF_BAND: (f64, f64) = (0.04, 0.15);
pub const HF_BAND: (f64, f64) = (0.15, 0.4);

/// The three spectral bands integrated into VLF/LF/HF powers. Each band is
/// half-open `[lo, hi)` in Hz; bands must ascend without overlapping so no
/// bin is counted twice.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FrequencyBands {
    pub vlf: (f64, f64),
    pub lf: (f64, f64),
    pub hf: (f64, f64),
}

impl Default for FrequencyBands {
    fn default() -> Self {
        Self {
            vlf: VLF_BAND,
            lf: LF_BAND,
            hf: HF_BAND,
        }
    }
}

impl FrequencyBands {
    /// # Errors
    /// [`Error::Parameter`] for non-finite, empty, descending, or
    /// overlapping bands.
    pub fn validate(&self) -> Result<()> {
        let edges = [
            self.vlf.0, self.vlf.1, self.lf.0, self.lf.1, self.hf.0, self.hf.1,
        ];
        if edges.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return Err(Error::Parameter(format!(
                "band edges must be finite and nonnegative, got {self:?}"
            )));
        }
        if edges.windows(2).any(|w| w[1] < w[0])
            || edges.windows(2).step_by(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::Parameter(format!(
                "bands must be non-empty, ascending, and non-overlapping, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Uniform resampling rate for the tachogram.
pub const RESAMPLE_RATE_HZ: f64 = 4.0;
/// Welch segment length in seconds.
const SEGMENT_S: f64 = 120.0;
/// Minimum window span required to resolve the VLF band edge.
const MIN_SPAN_S: f64 = 300.0;

/// Band powers in ms².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyFeatures {
    pub vlf: f64,
    pub lf: f64,
    pub hf: f64,
    /// `LF / HF`; 0 by convention when `HF` is 0.
    pub lf_hf: f64,
}

/// Compute band powers for one HRV window with the default bands.
///
/// # Errors
/// See [`hrv_frequency_features_in`].
pub fn hrv_frequency_features(intervals: &[f64]) -> Result<FrequencyFeatures> {
    hrv_frequency_features_in(intervals, &FrequencyBands::default())
}

/// Compute band powers for one HRV window over caller-chosen bands.
///
/// # Errors
/// [`Error::InsufficientData`] if the window spans less than 300 s (the
/// period of the lowest VLF edge) or has fewer than 2 intervals;
/// [`Error::Parameter`] for invalid bands.
pub fn hrv_frequency_features_in(
    intervals: &[f64],
    bands: &FrequencyBands,
) -> Result<FrequencyFeatures> {
    bands.validate()?;
    if intervals.len() < 2 {
        return Err(Error::InsufficientData(
            "frequency features need at least 2 intervals".into(),
        ));
    }
    let span_ms: f64 = intervals.iter().sum();
    if span_ms < MIN_SPAN_S * 1000.0 {
        return Err(Error::InsufficientData(format!(
            "frequency features need a window spanning at least {MIN_SPAN_S} s, got {:.3} s",
            span_ms / 1000.0
        )));
    }

    // Tachogram knots: interval k is attached to the time of the beat that
    // ends it (seconds from window start).
    let mut t = Vec::with_capacity(intervals.len());
    let mut acc = 0.0;
    for &iv in intervals {
        acc += iv;
        t.push(acc / 1000.0);
    }
    let spline = NaturalCubicSpline::fit(&t, intervals)?;

    let t0 = t[0];
    let t_last = *t.last().expect("non-empty");
    let mut resampled = Vec::new();
    let mut i = 0usize;
    loop {
        let u = t0 + i as f64 / RESAMPLE_RATE_HZ;
        if u > t_last + 1e-9 {
            break;
        }
        resampled.push(spline.eval(u.min(t_last)));
        i += 1;
    }

    let mean = resampled.iter().sum::<f64>() / resampled.len() as f64;
    for v in &mut resampled {
        *v -= mean;
    }

    let psd = welch_psd(&resampled, RESAMPLE_RATE_HZ);
    let vlf = psd.band_power(bands.vlf);
    let lf = psd.band_power(bands.lf);
    let hf = psd.band_power(bands.hf);
    Ok(FrequencyFeatures {
        vlf,
        lf,
        hf,
        lf_hf: if hf == 0.0 { 0.0 } else { lf / hf },
    })
}

/// Natural cubic spline through strictly increasing knots.
struct NaturalCubicSpline {
    t: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots (natural: zero at both ends).
    m: Vec<f64>,
}

impl NaturalCubicSpline {
    fn fit(t: &[f64], y: &[f64]) -> Result<Self> {
        if t.len() != y.len() || t.len() < 2 {
            return Err(Error::Parameter(
                "spline needs matching knot/value slices of length >= 2".into(),
            ));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parameter(
                "spline knots must be strictly increasing".into(),
            ));
        }
        let n = t.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the standard tridiagonal system for the
            // interior second derivatives; the matrix is diagonally
            // dominant, so no pivoting is needed.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 1..=k {
                let h0 = t[i] - t[i - 1];
                let h1 = t[i + 1] - t[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                upper[i - 1] = h1;
                rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 1..k {
                let lower = t[i + 1] - t[i]; // h_i = sub-diagonal entry of row i
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (1..k).rev() {
                m[i] = (rhs[i - 1] - upper[i - 1] * m[i + 1]) / diag[i - 1];
            }
        }
        Ok(Self {
            t: t.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    /// Evaluate inside the knot range (callers clamp to the last knot).
    fn eval(&self, u: f64) -> f64 {
        let n = self.t.len();
        let i = match self
            .t
            .binary_search_by(|v| v.partial_cmp(&u).expect("finite knots"))
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.t[i + 1] - self.t[i];
        let a = (self.t[i + 1] - u) / h;
        let b = (u - self.t[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

/// One-sided Welch power spectral density.
struct WelchPsd {
    /// Density at each bin, units²/Hz.
    density: Vec<f64>,
    /// Bin spacing, Hz.
    df: f64,
}

impl WelchPsd {
    /// Integrate the density over a half-open band `lo ≤ f < hi`.
    fn band_power(&self, band: (f64, f64)) -> f64 {
        self.density
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let f = *k as f64 * self.df;
                f >= band.0 && f < band.1
            })
            .map(|(_, p)| p * self.df)
            .sum()
    }

    #[cfg(test)]
    fn total_power(&self) -> f64 {
        self.density.iter().map(|p| p * self.df).sum()
    }
}

/// Welch estimate with periodic Hann windows of up to [`SEGMENT_S`] seconds
/// and 50% overlap. The signal is expected to be demeaned by the caller.
fn welch_psd(x: &[f64], fs: f64) -> WelchPsd {
    let nperseg = ((SEGMENT_S * fs) as usize).min(x.len()).max(2);
    let hop = (nperseg / 2).max(1);
    let window: Vec<f64> = (0..nperseg)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / nperseg as f64).cos()))
        .collect();
    let win_power: f64 = window.iter().map(|w| w * w).sum();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(nperseg);
    let n_bins = nperseg / 2 + 1;
    let mut acc = vec![0.0; n_bins];
    let mut n_segments = 0usize;
    let mut start = 0usize;
    while start + nperseg <= x.len() {
        let mut buf: Vec<Complex64> = x[start..start + nperseg]
            .iter()
            .zip(&window)
            .map(|(v, w)| Complex64::new(v * w, 0.0))
            .collect();
        fft.process(&mut buf);
        for (k, slot) in acc.iter_mut().enumerate() {
            *slot += buf[k].norm_sqr();
        }
        n_segments += 1;
        start += hop;
    }
    debug_assert!(n_segments > 0, "nperseg <= x.len() guarantees a segment");

    let scale = 1.0 / (fs * win_power * n_segments as f64);
    let mut density: Vec<f64> = acc.iter().map(|p| p * scale).collect();
    // One-sided correction: interior bins carry the mirrored half too.
    for (k, d) in density.iter_mut().enumerate() {
        let is_nyquist = nperseg.is_multiple_of(2) && k == n_bins - 1;
        if k != 0 && !is_nyquist {
            *d *= 2.0;
        }
    }
    WelchPsd {
        density,
        df: fs / nperseg as f64,
    }
}
