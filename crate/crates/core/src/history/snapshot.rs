use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ast::{cyclomatic_complexity, edge_histogram, line_count, parse_source, Language};
use crate::config::AnalysisConfig;
use crate::histogram::{l1_distance, SymbolHistogram};
use crate::metrics::MetricValues;
use crate::tokens::{mode_histograms, strip_comments, TokenizationMode};

/// Everything measured from one blob's content. This is what the blob cache
/// stores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurables {
    pub edge_hist: SymbolHistogram,
    /// Indexed by [`TokenizationMode::index`].
    pub token_hists: [SymbolHistogram; 3],
    pub loc: u32,
    pub token_count: u64,
    pub cc: u32,
    pub parse_ok: bool,
    /// Set when the blob exceeded the size limit and was not measured.
    #[serde(default)]
    pub skipped: bool,
}

impl Measurables {
    pub fn empty() -> Self {
        Self {
            edge_hist: SymbolHistogram::new(),
            token_hists: Default::default(),
            loc: 0,
            token_count: 0,
            cc: 0,
            parse_ok: true,
            skipped: false,
        }
    }

    pub fn skipped() -> Self {
        Self {
            skipped: true,
            ..Self::empty()
        }
    }

    pub fn token_hist(&self, mode: TokenizationMode) -> &SymbolHistogram {
        &self.token_hists[mode.index()]
    }

    pub fn metrics(&self) -> MetricValues {
        MetricValues::of_file(&self.edge_hist, &self.token_hists)
    }
}

/// A measured file at one point in history.
#[derive(Debug, Clone)]
pub struct FileSnapshot {
    pub path: String,
    /// Git blob id of the content, in hex.
    pub content_hash: String,
    pub measures: Arc<Measurables>,
    /// Per-file metric values, derived from `measures`.
    pub metrics: MetricValues,
}

impl FileSnapshot {
    pub fn new(
        path: impl Into<String>,
        content_hash: impl Into<String>,
        measures: Arc<Measurables>,
    ) -> Self {
        let metrics = measures.metrics();
        Self {
            path: path.into(),
            content_hash: content_hash.into(),
            measures,
            metrics,
        }
    }
}

/// Parses and tokenizes one file's content.
///
/// A parse failure leaves the edge histogram empty and complexity 0 but
/// still yields token histograms. Without a grammar for the file only
/// textual metrics are produced.
pub fn measure_file(
    content: &str,
    language: Option<Language>,
    config: &AnalysisConfig,
) -> Measurables {
    let (edge_hist, cc, parse_ok) = match language.map(|l| parse_source(content, l)) {
        Some(Ok(outcome)) => match outcome.tree {
            Some(tree) => (edge_histogram(&tree), cyclomatic_complexity(&tree), true),
            None => (SymbolHistogram::new(), 0, false),
        },
        Some(Err(e)) => {
            log::warn!("parser unavailable: {e}");
            (SymbolHistogram::new(), 0, false)
        }
        None => (SymbolHistogram::new(), 0, true),
    };
    let token_hists = if config.include_comments {
        mode_histograms(content, &config.stoplist)
    } else {
        mode_histograms(&strip_comments(content), &config.stoplist)
    };
    Measurables {
        token_count: token_hists[TokenizationMode::Full.index()].total(),
        edge_hist,
        token_hists,
        loc: line_count(content),
        cc,
        parse_ok,
        skipped: false,
    }
}

/// One touched file: the snapshot before and after the commit, plus the
/// line counts from the textual diff.
#[derive(Debug, Clone, Default)]
pub struct FileChange {
    pub before: Option<FileSnapshot>,
    pub after: Option<FileSnapshot>,
    pub added_lines: u64,
    pub deleted_lines: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CommitDelta {
    pub delta: MetricValues,
    pub modified_lines: u64,
    pub modified_tokens: u64,
    pub cc_after_sum: u64,
    pub cc_delta: i64,
}

/// Net metric change over the touched files. A missing side contributes
/// zero, so additions and deletions are the two halves of a modification.
pub fn commit_delta(changes: &[FileChange]) -> CommitDelta {
    let mut out = CommitDelta::default();
    for change in changes {
        let before = change.before.as_ref();
        let after = change.after.as_ref();
        if let Some(b) = before {
            out.delta = out.delta - b.metrics;
        }
        if let Some(a) = after {
            out.delta += a.metrics;
        }
        out.modified_tokens += match (before, after) {
            (Some(b), Some(a)) => l1_distance(
                b.measures.token_hist(TokenizationMode::Full),
                a.measures.token_hist(TokenizationMode::Full),
            ),
            (Some(s), None) | (None, Some(s)) => s.measures.token_count,
            (None, None) => 0,
        };
        out.modified_lines += change.added_lines + change.deleted_lines;
        let cc_before = before.map_or(0, |s| s.measures.cc);
        let cc_after = after.map_or(0, |s| s.measures.cc);
        out.cc_after_sum += u64::from(cc_after);
        out.cc_delta += i64::from(cc_after) - i64::from(cc_before);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Metric;

    fn snapshot(content: &str) -> FileSnapshot {
        let m = measure_file(content, Some(Language::Java), &AnalysisConfig::default());
        FileSnapshot::new("A.java", "h", Arc::new(m))
    }

    #[test]
    fn empty_file() {
        let m = measure_file("", Some(Language::Java), &AnalysisConfig::default());
        assert!(m.edge_hist.is_empty());
        assert!(m.token_hists.iter().all(SymbolHistogram::is_empty));
        assert_eq!((m.loc, m.cc, m.parse_ok), (0, 0, true));
    }

    #[test]
    fn broken_file_keeps_tokens() {
        let m = measure_file(
            "class Broken { void f( {",
            Some(Language::Java),
            &AnalysisConfig::default(),
        );
        assert!(!m.parse_ok);
        assert!(m.edge_hist.is_empty());
        assert_eq!(m.cc, 0);
        assert_eq!(m.token_hist(TokenizationMode::Full).count("broken"), 1);
        assert_eq!(m.token_count, 4);
    }

    #[test]
    fn comment_exclusion() {
        let src = "class A { // lorem ipsum\n }";
        let mut config = AnalysisConfig::default();
        assert_eq!(
            measure_file(src, Some(Language::Java), &config).token_count,
            4
        );
        config.include_comments = false;
        assert_eq!(
            measure_file(src, Some(Language::Java), &config).token_count,
            2
        );
    }

    #[test]
    fn token_count_is_full_total() {
        let m = measure_file(
            "public class A { int x = 42; }",
            Some(Language::Java),
            &AnalysisConfig::default(),
        );
        assert_eq!(m.token_count, m.token_hist(TokenizationMode::Full).total());
        assert_eq!(m.token_count, 6);
        assert_eq!(m.token_hist(TokenizationMode::NoKeywords).total(), 3);
        assert_eq!(
            m.token_hist(TokenizationMode::NoKeywordsNoNumbers).total(),
            2
        );
    }

    #[test]
    fn add_and_delete_are_symmetric() {
        let s = snapshot("class A { int add(int a, int b) { return a + b; } }");
        let h = s.metrics[Metric::Struct];
        assert!(h > 0.0);

        let added = commit_delta(&[FileChange {
            after: Some(s.clone()),
            added_lines: 1,
            ..Default::default()
        }]);
        assert_eq!(added.delta[Metric::Struct], h);
        assert_eq!(added.modified_lines, 1);
        assert_eq!(added.modified_tokens, s.measures.token_count);
        assert_eq!(added.cc_after_sum, 1);
        assert_eq!(added.cc_delta, 1);

        let deleted = commit_delta(&[FileChange {
            before: Some(s.clone()),
            deleted_lines: 1,
            ..Default::default()
        }]);
        assert_eq!(deleted.delta[Metric::Struct], -h);
        assert_eq!(deleted.cc_after_sum, 0);
        assert_eq!(deleted.cc_delta, -1);
    }

    #[test]
    fn pure_rename_is_neutral() {
        let s = snapshot("class A { void f() { } }");
        let mut moved = s.clone();
        moved.path = "B.java".into();
        let d = commit_delta(&[FileChange {
            before: Some(s),
            after: Some(moved),
            ..Default::default()
        }]);
        assert_eq!(d.delta, MetricValues::ZERO);
        assert_eq!(d.modified_tokens, 0);
        assert_eq!(d.cc_delta, 0);
    }

    #[test]
    fn substitution_counts_modified_tokens() {
        let a = snapshot("class A { int alpha; }");
        let b = snapshot("class A { int beta; }");
        let d = commit_delta(&[FileChange {
            before: Some(a),
            after: Some(b),
            added_lines: 1,
            deleted_lines: 1,
        }]);
        assert_eq!(d.modified_tokens, 2);
        assert_eq!(d.modified_lines, 2);
    }
}
