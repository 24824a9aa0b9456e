//! Small shared descriptive-statistics kernel.
//!
//! Population (biased, `1/n`) moments throughout: the feature definitions
//! treat each window as a complete population rather than a sample, and the
//! robust scaler uses linearly interpolated quantiles. Degenerate inputs
//! (zero variance) yield 0 for the standardized moments instead of NaN so
//! downstream feature vectors stay finite.

/// Arithmetic mean. Returns 0.0 for an empty slice.
pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

/// Population variance (`1/n`). Returns 0.0 for slices shorter than 2.
pub fn var_pop(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64
}

/// Population standard deviation.
pub fn std_pop(x: &[f64]) -> f64 {
    var_pop(x).sqrt()
}

/// Median via sorting (linear interpolation between the two middle values
/// for even lengths). Returns 0.0 for an empty slice.
pub fn median(x: &[f64]) -> f64 {
    quantile(x, 0.5)
}

/// Quantile with linear interpolation between closest ranks, matching the
/// common `(n - 1) * q` convention. `q` is clamped to `[0, 1]`.
/// Returns 0.0 for an empty slice.
pub fn quantile(x: &[f64], q: f64) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| {
        a.partial_cmp(b)
            .expect("non-finite value in quantile input")
    });
    let q = q.clamp(0.0, 1.0);
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = pos - lo as f64;
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

/// Population skewness (third standardized moment). 0.0 when the variance
/// is zero or fewer than 2 values are given.
pub fn skewness_pop(x: &[f64]) -> f64 {
    let s = std_pop(x);
    if s == 0.0 {
        return 0.0;
    }
    let m = mean(x);
    let n = x.len() as f64;
    x.iter().map(|v| ((v - m) / s).powi(3)).sum::<f64>() / n
}

/// Population excess kurtosis (fourth standardized moment minus 3).
/// 0.0 when the variance is zero or fewer than 2 values are given.
pub fn excess_kurtosis_pop(x: &[f64]) -> f64 {
    let s = std_pop(x);
    if s == 0.0 {
        return 0.0;
    }
    let m = mean(x);
    let n = x.len() as f64;
    x.iter().map(|v| ((v - m) / s).powi(4)).sum::<f64>() / n - 3.0
}

/// Root mean square. Returns 0.0 for an empty slice.
pub fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Successive differences `x[i+1] - x[i]`. Empty for slices shorter than 2.
pub fn diffs(x: &[f64]) -> Vec<f64> {
    x.windows(2).map(|w| w[1] - w[0]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_variance_of_small_population() {
        let x = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert!((mean(&x) - 5.0).abs() < 1e-12);
        // Classic population example: variance 4, std 2.
        assert!((var_pop(&x) - 4.0).abs() < 1e-12);
        assert!((std_pop(&x) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn median_interpolates_even_lengths() {
        assert_eq!(median(&[1.0, 3.0]), 2.0);
        assert_eq!(median(&[5.0, 1.0, 3.0]), 3.0);
        assert_eq!(median(&[]), 0.0);
    }

    #[test]
    fn quantiles_use_linear_interpolation() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        // (n-1)*q = 4*0.25 = 1.0 -> exactly the second value.
        assert_eq!(quantile(&x, 0.25), 2.0);
        assert_eq!(quantile(&x, 0.75), 4.0);
        // Position 4*0.1 = 0.4 -> 1.0 + 0.4*(2.0-1.0).
        assert!((quantile(&x, 0.1) - 1.4).abs() < 1e-12);
    }

    #[test]
    fn symmetric_data_has_zero_skew() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!(skewness_pop(&x).abs() < 1e-12);
    }

    #[test]
    fn right_tail_gives_positive_skew() {
        let x = [1.0, 1.0, 1.0, 1.0, 10.0];
        assert!(skewness_pop(&x) > 1.0);
    }

    #[test]
    fn degenerate_inputs_standardized_moments_are_zero() {
        let x = [3.0, 3.0, 3.0];
        assert_eq!(skewness_pop(&x), 0.0);
        assert_eq!(excess_kurtosis_pop(&x), 0.0);
        assert_eq!(skewness_pop(&[1.0]), 0.0);
    }

    #[test]
    fn kurtosis_of_two_point_distribution() {
        // Symmetric two-point mass has fourth standardized moment exactly 1,
        // so excess kurtosis is -2.
        let x = [-1.0, 1.0, -1.0, 1.0];
        assert!((excess_kurtosis_pop(&x) - (-2.0)).abs() < 1e-12);
    }

    #[test]
    fn rms_and_diffs_hand_checked() {
        assert!((rms(&[3.0, 4.0]) - (12.5f64).sqrt()).abs() < 1e-12);
        assert_eq!(diffs(&[800.0, 810.0, 790.0]), vec![10.0, -20.0]);
        assert!(diffs(&[1.0]).is_empty());
    }
}
