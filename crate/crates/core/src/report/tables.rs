//! Correlation, outlier, label, and summary files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analytics::{
    classify_correlation, CorrelationMatrix, Expectation, OutlierReport, QUANTILE_SCHEME,
};
use crate::error::ReportError;
use crate::history::AnalysisSeries;
use crate::metrics::Metric;

use super::number::{format_sig9, round_sig9};

pub const MATRIX_HEADER: &str = "row,col,rho,category";

/// Long-form matrix: one `row,col,rho,category` line per cell. Undefined
/// cells are written as `n/a`.
pub fn write_matrix_csv(matrix: &CorrelationMatrix) -> String {
    let mut out = format!("{MATRIX_HEADER}\n");
    for (r, row) in matrix.row_labels.iter().enumerate() {
        for (c, col) in matrix.col_labels.iter().enumerate() {
            let (rho, category) = match matrix.get(r, c) {
                Some(v) => (
                    format_sig9(v),
                    classify_correlation(v).map_or_else(|_| "n/a".to_string(), |s| s.to_string()),
                ),
                None => ("n/a".to_string(), "n/a".to_string()),
            };
            let _ = writeln!(out, "{row},{col},{rho},{category}");
        }
    }
    out
}

pub const OUTLIER_HEADER: &str =
    "metric,factor,quantile_scheme,q1,q3,iqr,lower_fence,upper_fence,n,outliers,fraction,flagged";

/// One line per report; `flagged` lists `commit=delta` pairs separated by `;`.
pub fn write_outliers_csv(series: &AnalysisSeries, reports: &[OutlierReport]) -> String {
    let mut out = format!("{OUTLIER_HEADER}\n");
    for r in reports {
        let metric = Metric::from_name(&r.metric);
        let flagged: Vec<String> = r
            .outlier_indices
            .iter()
            .map(|&i| {
                let record = &series.records[i];
                let delta = metric.map_or(f64::NAN, |m| record.delta[m]);
                format!("{}={}", record.commit_hash, format_sig9(delta))
            })
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.metric,
            format_sig9(r.factor),
            QUANTILE_SCHEME,
            format_sig9(r.q1),
            format_sig9(r.q3),
            format_sig9(r.iqr),
            format_sig9(r.lower_fence),
            format_sig9(r.upper_fence),
            series.len(),
            r.outlier_indices.len(),
            format_sig9(r.fraction),
            flagged.join(";"),
        );
    }
    out
}

/// `commit,label` rows with labels in {-1, 0, 1}. The header is optional.
pub fn read_labels_csv(text: &str) -> Result<Vec<(String, Expectation)>, ReportError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (idx == 0 && line == "commit,label") {
            continue;
        }
        let bad = |message: &str| ReportError::MalformedLabels {
            line: idx + 1,
            message: message.to_string(),
        };
        let (commit, label) = line
            .split_once(',')
            .ok_or_else(|| bad("expected commit,label"))?;
        let value: i64 = label
            .trim()
            .parse()
            .map_err(|_| bad("label is not an integer"))?;
        let expectation =
            Expectation::from_value(value).ok_or_else(|| bad("label must be -1, 0 or 1"))?;
        out.push((commit.trim().to_string(), expectation));
    }
    Ok(out)
}

pub fn write_labels_csv(labels: &[(String, Expectation)]) -> String {
    let mut out = String::from("commit,label\n");
    for (commit, label) in labels {
        let _ = writeln!(out, "{commit},{}", label.value());
    }
    out
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub repo_id: String,
    pub commit_count: usize,
    pub runtime_seconds: f64,
    /// Final cumulative metrics, rounded exactly as in `series.csv`.
    pub final_cumulative: BTreeMap<String, f64>,
    pub parse_failures: u64,
    pub failed_paths: Vec<String>,
    pub skipped_files: u64,
    pub config_fingerprint: String,
    pub config: serde_json::Value,
    pub metadata: BTreeMap<String, String>,
}

impl Summary {
    pub fn new(series: &AnalysisSeries, runtime_seconds: f64, config: serde_json::Value) -> Self {
        let final_cumulative = Metric::ALL
            .iter()
            .map(|&m| {
                let v = series.last().map_or(0.0, |r| r.cumulative[m]);
                (format!("c_{}", m.name()), round_sig9(v))
            })
            .collect();
        let mut failed_paths: Vec<String> = series
            .records
            .iter()
            .flat_map(|r| r.failed_paths.iter().cloned())
            .collect();
        failed_paths.sort();
        failed_paths.dedup();
        let mut metadata: BTreeMap<String, String> = crate::analytics::METADATA
            .iter()
            .map(|&(k, v)| (k.to_string(), v.to_string()))
            .collect();
        metadata.insert("cc_variant".into(), crate::config::CC_VARIANT.into());
        metadata.insert("entropy_unit".into(), "bits".into());
        metadata.insert("context".into(), "file".into());
        metadata.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
        Self {
            repo_id: series.repo_id.clone(),
            commit_count: series.len(),
            runtime_seconds,
            final_cumulative,
            parse_failures: series.parse_failures(),
            failed_paths,
            skipped_files: series
                .records
                .iter()
                .map(|r| u64::from(r.skipped_files))
                .sum(),
            config_fingerprint: series.config_fingerprint.clone(),
            config,
            metadata,
        }
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}
