//! Symbol histograms and the entropy measures defined over them.
//!
//! A [`SymbolHistogram`] is a multiset of opaque labels. The same type carries
//! AST-edge distributions and word distributions, so every entropy metric in
//! the crate reduces to the functions in this module.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::HistogramError;

/// Multiset of symbol labels with strictly positive counts.
///
/// Entries are kept in a `BTreeMap` so iteration and serialization order are
/// stable across runs.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "BTreeMap<String, u64>", into = "BTreeMap<String, u64>")]
pub struct SymbolHistogram {
    entries: BTreeMap<String, u64>,
    total: u64,
}

impl SymbolHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one occurrence of `symbol`.
    pub fn add(&mut self, symbol: impl Into<String>) {
        self.add_count(symbol, 1);
    }

    /// Adds `count` occurrences of `symbol`. A zero count is a no-op.
    pub fn add_count(&mut self, symbol: impl Into<String>, count: u64) {
        if count == 0 {
            return;
        }
        *self.entries.entry(symbol.into()).or_insert(0) += count;
        self.total += count;
    }

    pub fn count(&self, symbol: &str) -> u64 {
        self.entries.get(symbol).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct symbols.
    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, String, u64> {
        self.entries.iter()
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }

    pub fn normalized_entropy(&self) -> f64 {
        normalized_entropy(self)
    }
}

impl fmt::Debug for SymbolHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl From<BTreeMap<String, u64>> for SymbolHistogram {
    fn from(map: BTreeMap<String, u64>) -> Self {
        map.into_iter().collect()
    }
}

impl From<SymbolHistogram> for BTreeMap<String, u64> {
    fn from(hist: SymbolHistogram) -> Self {
        hist.entries
    }
}

impl<'a> FromIterator<&'a str> for SymbolHistogram {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        let mut hist = Self::new();
        for symbol in iter {
            hist.add(symbol);
        }
        hist
    }
}

impl FromIterator<String> for SymbolHistogram {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        let mut hist = Self::new();
        for symbol in iter {
            hist.add(symbol);
        }
        hist
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for SymbolHistogram {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        let mut hist = Self::new();
        for (symbol, count) in iter {
            hist.add_count(symbol, count);
        }
        hist
    }
}

impl<'a> IntoIterator for &'a SymbolHistogram {
    type Item = (&'a String, &'a u64);
    type IntoIter = btree_map::Iter<'a, String, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Entropy of a histogram in bits, together with its normalized form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub bits: f64,
    /// `bits / log2(support)`, or 0 when the support has fewer than two symbols.
    pub normalized: f64,
}

impl EntropyValue {
    pub fn of(hist: &SymbolHistogram) -> Self {
        let bits = entropy(hist);
        Self {
            bits,
            normalized: normalize(bits, hist.support()),
        }
    }
}

/// Shannon entropy in bits: `-Σ p·log2 p` over the stored symbols.
///
/// Empty and single-symbol histograms have entropy 0.
pub fn entropy(hist: &SymbolHistogram) -> f64 {
    if hist.support() < 2 {
        return 0.0;
    }
    let total = hist.total as f64;
    // Summing in count order makes the result depend only on the multiset
    // of counts, so relabeling symbols cannot change a single bit.
    let mut counts: Vec<u64> = hist.entries.values().copied().collect();
    counts.sort_unstable();
    let sum: f64 = counts
        .into_iter()
        .map(|c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    // Rounding can leave a tiny negative residue for near-degenerate inputs.
    sum.max(0.0)
}

/// Entropy divided by the maximum attainable entropy for the same support,
/// `log2(|support|)`. Defined as 0 for support below two.
pub fn normalized_entropy(hist: &SymbolHistogram) -> f64 {
    normalize(entropy(hist), hist.support())
}

fn normalize(bits: f64, support: usize) -> f64 {
    if support < 2 {
        return 0.0;
    }
    (bits / (support as f64).log2()).min(1.0)
}

/// Union of histograms with per-symbol count addition.
pub fn merge<'a, I>(parts: I) -> SymbolHistogram
where
    I: IntoIterator<Item = &'a SymbolHistogram>,
{
    let mut out = SymbolHistogram::new();
    for part in parts {
        for (symbol, &count) in part {
            out.add_count(symbol.clone(), count);
        }
    }
    out
}

/// `Σ |count_a(s) - count_b(s)|` over the union of supports.
pub fn l1_distance(a: &SymbolHistogram, b: &SymbolHistogram) -> u64 {
    let mut distance = 0;
    for (symbol, &ca) in a {
        distance += ca.abs_diff(b.count(symbol));
    }
    for (symbol, &cb) in b {
        if !a.entries.contains_key(symbol) {
            distance += cb;
        }
    }
    distance
}

/// Entropy of a file evaluated against a larger context (experimental).
///
/// Each symbol's probability is the ratio of its relative frequency in the
/// file to its relative frequency in the context, clamped into `(0, 1]`
/// before taking the logarithm. The context must contain every symbol of the
/// file; merge the file into the context first to guarantee this.
pub fn entropy_vs_context(
    file: &SymbolHistogram,
    context: &SymbolHistogram,
) -> Result<f64, HistogramError> {
    if file.is_empty() {
        return Ok(0.0);
    }
    let file_total = file.total as f64;
    let context_total = context.total as f64;
    let mut sum = 0.0;
    for (symbol, &count) in file {
        let in_context = context.count(symbol);
        if in_context == 0 {
            return Err(HistogramError::SymbolAbsentFromContext(symbol.clone()));
        }
        let ratio = (count as f64 / file_total) / (in_context as f64 / context_total);
        let p = ratio.min(1.0);
        sum -= p * p.log2();
    }
    Ok(sum.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(pairs: &[(&str, u64)]) -> SymbolHistogram {
        pairs.iter().map(|&(s, c)| (s, c)).collect()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(
            entropy(&hist(&[("a", 1), ("b", 1), ("c", 1), ("d", 1)])),
            2.0
        );
        assert_eq!(entropy(&hist(&[("a", 5)])), 0.0);
        assert!((entropy(&hist(&[("a", 2), ("b", 1), ("c", 1)])) - 1.5).abs() < 1e-12);
        assert_eq!(entropy(&SymbolHistogram::new()), 0.0);
    }

    #[test]
    fn normalized_examples() {
        assert_eq!(normalized_entropy(&hist(&[("a", 1), ("b", 1)])), 1.0);
        assert_eq!(normalized_entropy(&hist(&[("a", 7)])), 0.0);
        assert_eq!(normalized_entropy(&SymbolHistogram::new()), 0.0);
        // 1.5 / log2(3), 0.946394630357186155... (mpmath, 30 digits)
        let v = normalized_entropy(&hist(&[("a", 2), ("b", 1), ("c", 1)]));
        assert!((v - 0.946394).abs() < 1e-6, "{v}");
        assert!((v - 0.946_394_630_357_186).abs() < 1e-12, "{v}");
    }

    #[test]
    fn zero_counts_are_not_stored() {
        let mut h = SymbolHistogram::new();
        h.add_count("a", 0);
        assert!(h.is_empty());
        assert_eq!(h.total(), 0);
    }

    #[test]
    fn merge_examples() {
        let merged = merge([&hist(&[("a", 1)]), &hist(&[("a", 2), ("b", 1)])]);
        assert_eq!(merged, hist(&[("a", 3), ("b", 1)]));
        assert_eq!(merged.total(), 4);
        assert_eq!(merge(std::iter::empty()), SymbolHistogram::new());
        let h = hist(&[("x", 3), ("y", 9)]);
        assert_eq!(merge([&h]), h);
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_distance(&hist(&[("x", 3)]), &hist(&[("x", 3)])), 0);
        assert_eq!(
            l1_distance(&hist(&[("x", 2), ("y", 1)]), &hist(&[("x", 1), ("z", 1)])),
            3
        );
        assert_eq!(l1_distance(&SymbolHistogram::new(), &hist(&[("w", 4)])), 4);
    }

    #[test]
    fn context_examples() {
        let h = hist(&[("a", 2), ("b", 5)]);
        assert_eq!(entropy_vs_context(&h, &h).unwrap(), 0.0);

        let v = entropy_vs_context(&hist(&[("a", 1)]), &hist(&[("a", 1), ("b", 1)])).unwrap();
        assert_eq!(v, 0.0);

        // -(2/3)·log2(2/3) = 0.389975000480770787... (mpmath, 30 digits)
        let v =
            entropy_vs_context(&hist(&[("a", 1), ("b", 1)]), &hist(&[("a", 3), ("b", 1)])).unwrap();
        assert!((v - 0.389_975_000_480_771).abs() < 1e-12, "{v}");
    }

    #[test]
    fn context_must_subsume_file() {
        let err = entropy_vs_context(&hist(&[("q", 1)]), &hist(&[("a", 1)])).unwrap_err();
        assert!(matches!(err, HistogramError::SymbolAbsentFromContext(ref s) if s == "q"));
    }

    #[test]
    fn uniform_is_log2_n() {
        for n in [2usize, 4, 8, 16] {
            let h: SymbolHistogram = (0..n).map(|i| i.to_string()).collect();
            assert_eq!(entropy(&h), (n as f64).log2());
            assert_eq!(normalized_entropy(&h), 1.0);
        }
    }

    /// Every histogram with support `n` and total `t`, as count vectors.
    fn compositions(n: usize, t: u64) -> Vec<Vec<u64>> {
        if n == 1 {
            return vec![vec![t]];
        }
        let mut out = Vec::new();
        for first in 1..=t.saturating_sub(n as u64 - 1) {
            for mut rest in compositions(n - 1, t - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    #[test]
    fn uniform_maximizes_entropy_by_enumeration() {
        for n in 2..=4usize {
            for t in n as u64..=8 {
                let all = compositions(n, t);
                let best = all
                    .iter()
                    .map(|counts| {
                        let h: SymbolHistogram = counts
                            .iter()
                            .enumerate()
                            .map(|(i, &c)| (i.to_string(), c))
                            .collect();
                        (entropy(&h), counts.clone())
                    })
                    .max_by(|a, b| a.0.total_cmp(&b.0))
                    .unwrap();
                let spread = best.1.iter().max().unwrap() - best.1.iter().min().unwrap();
                // The maximizer is as close to uniform as the total allows.
                assert!(spread <= 1, "n={n} t={t} best={:?}", best.1);
                assert!(best.0 <= (n as f64).log2() + 1e-12);
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let h = hist(&[("a→b", 3), ("c", 1)]);
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(json, r#"{"a→b":3,"c":1}"#);
        let back: SymbolHistogram = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.total(), 4);
    }

    fn arb_hist() -> impl Strategy<Value = SymbolHistogram> {
        prop::collection::btree_map("[a-e]", 1u64..6, 0..5).prop_map(|m| m.into_iter().collect())
    }

    proptest! {
        #[test]
        fn bounds(h in arb_hist()) {
            let e = entropy(&h);
            prop_assert!(e >= 0.0);
            if h.support() >= 1 {
                prop_assert!(e <= (h.support() as f64).log2() + 1e-12);
            }
            let n = normalized_entropy(&h);
            prop_assert!((0.0..=1.0).contains(&n));
        }

        #[test]
        fn relabeling_invariance(h in arb_hist(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut labels: Vec<String> = h.iter().map(|(s, _)| format!("r{s}")).collect();
            labels.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
            let relabeled: SymbolHistogram =
                labels.into_iter().zip(h.iter().map(|(_, &c)| c)).collect();
            prop_assert_eq!(entropy(&h), entropy(&relabeled));
            prop_assert_eq!(normalized_entropy(&h), normalized_entropy(&relabeled));
        }

        #[test]
        fn merge_is_associative_and_commutative(a in arb_hist(), b in arb_hist(), c in arb_hist()) {
            prop_assert_eq!(merge([&a, &b]), merge([&b, &a]));
            let left = merge([&merge([&a, &b]), &c]);
            let right = merge([&a, &merge([&b, &c])]);
            prop_assert_eq!(left.total(), a.total() + b.total() + c.total());
            prop_assert_eq!(left, right);
        }

        #[test]
        fn l1_is_a_metric(a in arb_hist(), b in arb_hist(), c in arb_hist()) {
            prop_assert_eq!(l1_distance(&a, &b), l1_distance(&b, &a));
            prop_assert_eq!(l1_distance(&a, &b) == 0, a == b);
            prop_assert!(l1_distance(&a, &c) <= l1_distance(&a, &b) + l1_distance(&b, &c));
        }
    }
}
