use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::StatsError;
use crate::history::{AnalysisSeries, CommitRecord};
use crate::metrics::Metric;

/// Coefficients this close to ±1 are reported as exactly ±1.
const UNIT_SNAP: f64 = 1e-12;

/// Average-fractional ranks (1-based); tied values share the mean of the
/// rank positions they span.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation; `None` when either input has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Option<f64>, StatsError> {
    check_pair(x, y)?;
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    Ok(Some(if 1.0 - r.abs() < UNIT_SNAP {
        r.signum()
    } else {
        r
    }))
}

/// Spearman's rho: Pearson correlation of fractional ranks. `None` when
/// either input is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Option<f64>, StatsError> {
    check_pair(x, y)?;
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    Spearman,
    Pearson,
}

/// Labeled matrix of correlation coefficients. Undefined cells are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub rho: Vec<Vec<Option<f64>>>,
    pub method: CorrelationMethod,
}

impl CorrelationMatrix {
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.rho[row][col]
    }

    pub fn cell(&self, row: &str, col: &str) -> Option<f64> {
        let r = self.row_labels.iter().position(|l| l == row)?;
        let c = self.col_labels.iter().position(|l| l == col)?;
        self.rho[r][c]
    }

    /// Spearman matrix between two families of columns.
    pub fn spearman(
        rows: &[(String, Vec<f64>)],
        cols: &[(String, Vec<f64>)],
    ) -> Result<Self, StatsError> {
        let rho = rows
            .iter()
            .map(|(_, x)| {
                cols.iter()
                    .map(|(_, y)| spearman(x, y))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            row_labels: rows.iter().map(|(l, _)| l.clone()).collect(),
            col_labels: cols.iter().map(|(l, _)| l.clone()).collect(),
            rho,
            method: CorrelationMethod::Spearman,
        })
    }

    /// Square, symmetric Spearman matrix of a family of columns.
    pub fn spearman_square(columns: &[(String, Vec<f64>)]) -> Result<Self, StatsError> {
        let n = columns.len();
        let mut rho = vec![vec![None; n]; n];
        for i in 0..n {
            for j in i..n {
                let value = spearman(&columns[i].1, &columns[j].1)?;
                rho[i][j] = value;
                rho[j][i] = value;
            }
        }
        let labels: Vec<String> = columns.iter().map(|(l, _)| l.clone()).collect();
        Ok(Self {
            row_labels: labels.clone(),
            col_labels: labels,
            rho,
            method: CorrelationMethod::Spearman,
        })
    }
}

fn require_len(series: &AnalysisSeries, needed: usize) -> Result<(), StatsError> {
    if series.len() < needed {
        return Err(StatsError::TooShort {
            needed,
            got: series.len(),
        });
    }
    Ok(())
}

fn column(series: &AnalysisSeries, f: impl Fn(&CommitRecord) -> f64) -> Vec<f64> {
    series.records.iter().map(f).collect()
}

/// 8×8 Spearman matrix over the cumulative curves of the entropy metrics.
pub fn entropy_correlation_matrix(
    series: &AnalysisSeries,
) -> Result<CorrelationMatrix, StatsError> {
    require_len(series, 2)?;
    let columns: Vec<(String, Vec<f64>)> = Metric::ALL
        .iter()
        .map(|&m| {
            (
                format!("c_{}", m.name()),
                column(series, |r| r.cumulative[m]),
            )
        })
        .collect();
    CorrelationMatrix::spearman_square(&columns)
}

/// Names of the classic-metric columns, in matrix order.
pub const CLASSIC_COLUMNS: [&str; 3] = ["mod_lines", "mod_tokens", "cc_after"];

fn classic_columns(series: &AnalysisSeries) -> Vec<(String, Vec<f64>)> {
    vec![
        (
            CLASSIC_COLUMNS[0].into(),
            column(series, |r| r.modified_lines as f64),
        ),
        (
            CLASSIC_COLUMNS[1].into(),
            column(series, |r| r.modified_tokens as f64),
        ),
        (
            CLASSIC_COLUMNS[2].into(),
            column(series, |r| r.cc_after_sum as f64),
        ),
    ]
}

/// 4×3 Spearman matrix: per-commit |delta| of the four raw entropy metrics
/// against modified lines, modified tokens, and post-commit complexity.
pub fn classic_correlation_matrix(
    series: &AnalysisSeries,
) -> Result<CorrelationMatrix, StatsError> {
    require_len(series, 2)?;
    let rows: Vec<(String, Vec<f64>)> = Metric::RAW
        .iter()
        .map(|&m| {
            (
                format!("abs_d_{}", m.name()),
                column(series, |r| r.delta[m].abs()),
            )
        })
        .collect();
    CorrelationMatrix::spearman(&rows, &classic_columns(series))
}

/// Same as [`classic_correlation_matrix`] but with signed deltas.
pub fn classic_correlation_matrix_signed(
    series: &AnalysisSeries,
) -> Result<CorrelationMatrix, StatsError> {
    require_len(series, 2)?;
    let rows: Vec<(String, Vec<f64>)> = Metric::RAW
        .iter()
        .map(|&m| (format!("d_{}", m.name()), column(series, |r| r.delta[m])))
        .collect();
    CorrelationMatrix::spearman(&rows, &classic_columns(series))
}

/// Dancey–Reidy strength bands for a correlation coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationStrength {
    None,
    Weak,
    Moderate,
    Strong,
    Perfect,
}

impl fmt::Display for CorrelationStrength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrelationStrength::None => "none",
            CorrelationStrength::Weak => "weak",
            CorrelationStrength::Moderate => "moderate",
            CorrelationStrength::Strong => "strong",
            CorrelationStrength::Perfect => "perfect",
        })
    }
}

/// Maps |rho| onto half-open bands: [0, 0.1) none, [0.1, 0.4) weak,
/// [0.4, 0.7) moderate, [0.7, 1) strong, 1 perfect.
pub fn classify_correlation(rho: f64) -> Result<CorrelationStrength, StatsError> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(StatsError::OutOfRange(rho));
    }
    let a = rho.abs();
    Ok(if a >= 1.0 {
        CorrelationStrength::Perfect
    } else if a >= 0.7 {
        CorrelationStrength::Strong
    } else if a >= 0.4 {
        CorrelationStrength::Moderate
    } else if a >= 0.1 {
        CorrelationStrength::Weak
    } else {
        CorrelationStrength::None
    })
}
