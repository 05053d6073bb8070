//! Statistics over an [`AnalysisSeries`].
//!
//! Entropy-vs-entropy correlations use the cumulative curves; entropy-vs-
//! classic correlations use per-commit magnitudes, because the classic
//! metrics only exist per commit. Both bases are echoed by [`METADATA`].

mod correlation;
mod outliers;

use serde::{Deserialize, Serialize};

pub use correlation::{
    classic_correlation_matrix, classic_correlation_matrix_signed, classify_correlation,
    entropy_correlation_matrix, fractional_ranks, pearson, spearman, CorrelationMatrix,
    CorrelationMethod, CorrelationStrength, CLASSIC_COLUMNS,
};
pub use outliers::{iqr_outliers, quantile_sorted, OutlierReport, QUANTILE_SCHEME};

use crate::error::StatsError;
use crate::history::AnalysisSeries;
use crate::metrics::Metric;

/// Choices that shape analytics output, for report metadata.
pub const METADATA: &[(&str, &str)] = &[
    ("entropy_correlation_basis", "cumulative"),
    ("classic_correlation_basis", "abs-per-commit-delta"),
    ("classic_cc_column", "cc_after_sum"),
    ("correlation_method", "spearman"),
    ("quantile_scheme", QUANTILE_SCHEME),
];

/// Cumulative structural entropy divided by the live file count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerFileSeries {
    pub values: Vec<f64>,
    /// Indices where no files were live; their value is 0.
    pub empty_indices: Vec<usize>,
}

pub fn per_file_series(series: &AnalysisSeries) -> PerFileSeries {
    let mut out = PerFileSeries {
        values: Vec::with_capacity(series.len()),
        empty_indices: Vec::new(),
    };
    for (i, record) in series.records.iter().enumerate() {
        if record.live_files == 0 {
            out.values.push(0.0);
            out.empty_indices.push(i);
        } else {
            out.values
                .push(record.cumulative[Metric::Struct] / f64::from(record.live_files));
        }
    }
    out
}

/// Per-commit deltas of one metric.
pub fn delta_column(series: &AnalysisSeries, metric: Metric) -> Vec<f64> {
    series.records.iter().map(|r| r.delta[metric]).collect()
}

/// IQR outliers over a metric's per-commit deltas.
pub fn delta_outliers(
    series: &AnalysisSeries,
    metric: Metric,
    factor: f64,
) -> Result<OutlierReport, StatsError> {
    Ok(iqr_outliers(&delta_column(series, metric), factor)?.with_metric(metric.name()))
}

/// Expected direction of a commit's entropy change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expectation {
    Decrease,
    NoChange,
    Increase,
}

impl Expectation {
    pub fn value(self) -> i8 {
        match self {
            Expectation::Decrease => -1,
            Expectation::NoChange => 0,
            Expectation::Increase => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            -1 => Some(Expectation::Decrease),
            0 => Some(Expectation::NoChange),
            1 => Some(Expectation::Increase),
            _ => None,
        }
    }

    /// Whether an observed delta agrees in sign. Exact zero is "no change".
    pub fn agrees_with(self, delta: f64) -> bool {
        match self {
            Expectation::Decrease => delta < 0.0,
            Expectation::NoChange => delta == 0.0,
            Expectation::Increase => delta > 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub metric: Metric,
    /// `None` when the labels or the deltas are constant.
    pub rho: Option<f64>,
    pub sign_mismatches: usize,
}

/// Spearman correlation between expectation labels and each metric's
/// per-commit deltas.
pub fn calibrate(
    series: &AnalysisSeries,
    labels: &[Expectation],
) -> Result<Vec<CalibrationResult>, StatsError> {
    if labels.len() != series.len() {
        return Err(StatsError::LengthMismatch(labels.len(), series.len()));
    }
    let label_values: Vec<f64> = labels.iter().map(|l| f64::from(l.value())).collect();
    Metric::ALL
        .iter()
        .map(|&metric| {
            let deltas = delta_column(series, metric);
            Ok(CalibrationResult {
                metric,
                rho: spearman(&label_values, &deltas)?,
                sign_mismatches: labels
                    .iter()
                    .zip(&deltas)
                    .filter(|(l, &d)| !l.agrees_with(d))
                    .count(),
            })
        })
        .collect()
}
