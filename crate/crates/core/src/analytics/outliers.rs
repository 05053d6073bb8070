use serde::{Deserialize, Serialize};

use crate::error::StatsError;

/// Name of the quantile scheme, written into report headers.
pub const QUANTILE_SCHEME: &str = "linear-interpolation (n-1)p";

/// IQR fences and the values outside them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    pub metric: String,
    pub factor: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    /// Positions in the input sequence (commit sequence indices for series).
    pub outlier_indices: Vec<usize>,
    pub fraction: f64,
}

impl OutlierReport {
    pub fn with_metric(mut self, metric: impl Into<String>) -> Self {
        self.metric = metric.into();
        self
    }
}

/// Quantile `p` of ascending `sorted` data, interpolating linearly between
/// the order statistics around position `(n - 1)·p`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Flags values below `Q1 - factor·IQR` or above `Q3 + factor·IQR`.
pub fn iqr_outliers(values: &[f64], factor: f64) -> Result<OutlierReport, StatsError> {
    if values.len() < 4 {
        return Err(StatsError::TooShort {
            needed: 4,
            got: values.len(),
        });
    }
    if factor.is_nan() || factor <= 0.0 {
        return Err(StatsError::BadFactor(factor));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let lower_fence = q1 - factor * iqr;
    let upper_fence = q3 + factor * iqr;
    let outlier_indices: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < lower_fence || v > upper_fence)
        .map(|(i, _)| i)
        .collect();
    Ok(OutlierReport {
        metric: String::new(),
        factor,
        q1,
        q3,
        iqr,
        lower_fence,
        upper_fence,
        fraction: outlier_indices.len() as f64 / values.len() as f64,
        outlier_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// k-th order statistic (0-based) found by counting, without sorting.
    fn order_statistic(values: &[f64], k: usize) -> f64 {
        *values
            .iter()
            .find(|&&v| {
                let less = values.iter().filter(|&&w| w < v).count();
                let equal = values.iter().filter(|&&w| w == v).count();
                less <= k && k < less + equal
            })
            .unwrap()
    }

    fn oracle_quantile(values: &[f64], p: f64) -> f64 {
        let n = values.len();
        let h = (n - 1) as f64 * p;
        let j = h as usize;
        let frac = h - j as f64;
        let a = order_statistic(values, j);
        let b = order_statistic(values, (j + 1).min(n - 1));
        a + frac * (b - a)
    }

    #[test]
    fn one_to_ten_plus_hundred() {
        let mut values: Vec<f64> = (1..=10).map(f64::from).collect();
        values.push(100.0);
        let r = iqr_outliers(&values, 1.5).unwrap();
        // h = 10·0.25 = 2.5 → 3 + 0.5·(4 − 3); h = 7.5 → 8 + 0.5·(9 − 8)
        assert_eq!(r.q1, 3.5);
        assert_eq!(r.q3, 8.5);
        assert_eq!(r.iqr, 5.0);
        assert_eq!(r.upper_fence, 16.0);
        assert_eq!(r.outlier_indices, vec![10]);
        assert_eq!(r.fraction, 1.0 / 11.0);
    }

    #[test]
    fn constant_values_have_no_outliers() {
        let r = iqr_outliers(&[2.0; 9], 1.5).unwrap();
        assert_eq!(r.iqr, 0.0);
        assert!(r.outlier_indices.is_empty());

        let mut v = vec![2.0; 9];
        v[4] = 2.5;
        assert_eq!(iqr_outliers(&v, 3.0).unwrap().outlier_indices, vec![4]);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            iqr_outliers(&[1.0, 2.0, 3.0], 1.5),
            Err(StatsError::TooShort { .. })
        ));
        assert!(matches!(
            iqr_outliers(&[1.0; 4], 0.0),
            Err(StatsError::BadFactor(_))
        ));
        assert!(matches!(
            iqr_outliers(&[1.0; 4], f64::NAN),
            Err(StatsError::BadFactor(_))
        ));
    }

    #[test]
    fn matches_oracle_exactly_on_random_inputs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for case in 0..1000 {
            let n = rng.gen_range(4..=200);
            let values: Vec<f64> = if case % 2 == 0 {
                (0..n).map(|_| rng.gen_range(0..15) as f64).collect()
            } else {
                (0..n).map(|_| rng.gen::<f64>() * 100.0 - 50.0).collect()
            };
            let r = iqr_outliers(&values, 1.5).unwrap();
            let q1 = oracle_quantile(&values, 0.25);
            let q3 = oracle_quantile(&values, 0.75);
            assert_eq!(r.q1, q1);
            assert_eq!(r.q3, q3);
            let (lo, hi) = (q1 - 1.5 * (q3 - q1), q3 + 1.5 * (q3 - q1));
            let want: Vec<usize> = (0..n)
                .filter(|&i| values[i] < lo || values[i] > hi)
                .collect();
            assert_eq!(r.outlier_indices, want);

            let extreme = iqr_outliers(&values, 3.0).unwrap();
            assert!(extreme
                .outlier_indices
                .iter()
                .all(|i| r.outlier_indices.contains(i)));
        }
    }
}
