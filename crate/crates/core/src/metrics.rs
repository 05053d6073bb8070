//! The eight per-file entropy metrics and fixed-size vectors over them.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Sub};

use serde::{Deserialize, Serialize};

use crate::histogram::{entropy, normalized_entropy, SymbolHistogram};
use crate::tokens::TokenizationMode;

/// One structural and three textual entropies, each raw and normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    Struct,
    TokFull,
    TokNoKw,
    TokNoKwNum,
    StructNorm,
    TokFullNorm,
    TokNoKwNorm,
    TokNoKwNumNorm,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Struct,
        Metric::TokFull,
        Metric::TokNoKw,
        Metric::TokNoKwNum,
        Metric::StructNorm,
        Metric::TokFullNorm,
        Metric::TokNoKwNorm,
        Metric::TokNoKwNumNorm,
    ];

    /// The structural metric and the three textual metrics, unnormalized.
    pub const RAW: [Metric; 4] = [
        Metric::Struct,
        Metric::TokFull,
        Metric::TokNoKw,
        Metric::TokNoKwNum,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Column stem: `struct`, `tok_full`, ..., `tok_nokwnum_norm`.
    pub fn name(self) -> &'static str {
        match self {
            Metric::Struct => "struct",
            Metric::TokFull => "tok_full",
            Metric::TokNoKw => "tok_nokw",
            Metric::TokNoKwNum => "tok_nokwnum",
            Metric::StructNorm => "struct_norm",
            Metric::TokFullNorm => "tok_full_norm",
            Metric::TokNoKwNorm => "tok_nokw_norm",
            Metric::TokNoKwNumNorm => "tok_nokwnum_norm",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn is_normalized(self) -> bool {
        self.index() >= 4
    }

    pub fn is_structural(self) -> bool {
        matches!(self, Metric::Struct | Metric::StructNorm)
    }

    pub fn mode(self) -> Option<TokenizationMode> {
        match self {
            Metric::TokFull | Metric::TokFullNorm => Some(TokenizationMode::Full),
            Metric::TokNoKw | Metric::TokNoKwNorm => Some(TokenizationMode::NoKeywords),
            Metric::TokNoKwNum | Metric::TokNoKwNumNorm => {
                Some(TokenizationMode::NoKeywordsNoNumbers)
            }
            Metric::Struct | Metric::StructNorm => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A value for each [`Metric`], indexed in [`Metric::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricValues(pub [f64; 8]);

impl MetricValues {
    pub const ZERO: MetricValues = MetricValues([0.0; 8]);

    /// Per-file metric values from a file's edge and mode histograms.
    pub fn of_file(edges: &SymbolHistogram, tokens: &[SymbolHistogram; 3]) -> Self {
        let mut values = [0.0; 8];
        values[Metric::Struct.index()] = entropy(edges);
        values[Metric::StructNorm.index()] = normalized_entropy(edges);
        for mode in TokenizationMode::ALL {
            let hist = &tokens[mode.index()];
            values[1 + mode.index()] = entropy(hist);
            values[5 + mode.index()] = normalized_entropy(hist);
        }
        MetricValues(values)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Metric, f64)> + '_ {
        Metric::ALL.into_iter().map(|m| (m, self.0[m.index()]))
    }
}

impl Index<Metric> for MetricValues {
    type Output = f64;

    fn index(&self, metric: Metric) -> &f64 {
        &self.0[metric.index()]
    }
}

impl IndexMut<Metric> for MetricValues {
    fn index_mut(&mut self, metric: Metric) -> &mut f64 {
        &mut self.0[metric.index()]
    }
}

impl Add for MetricValues {
    type Output = MetricValues;

    fn add(mut self, rhs: MetricValues) -> MetricValues {
        self += rhs;
        self
    }
}

impl AddAssign for MetricValues {
    fn add_assign(&mut self, rhs: MetricValues) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for MetricValues {
    type Output = MetricValues;

    fn sub(mut self, rhs: MetricValues) -> MetricValues {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(Metric::from_name(m.name()), Some(m));
        }
        assert_eq!(Metric::from_name("nope"), None);
    }

    #[test]
    fn file_values_follow_histograms() {
        let edges: SymbolHistogram = ["a", "b", "c", "d"].into_iter().collect();
        let tok: SymbolHistogram = ["x", "x", "y", "z"].into_iter().collect();
        let v = MetricValues::of_file(&edges, &[tok.clone(), tok.clone(), SymbolHistogram::new()]);
        assert_eq!(v[Metric::Struct], 2.0);
        assert_eq!(v[Metric::StructNorm], 1.0);
        assert!((v[Metric::TokFull] - 1.5).abs() < 1e-12);
        assert_eq!(v[Metric::TokNoKwNum], 0.0);
        assert_eq!(v[Metric::TokNoKwNumNorm], 0.0);
    }
}
