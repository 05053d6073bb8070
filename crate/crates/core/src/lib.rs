//! Structural and textual entropy of source code, measured commit by commit.
//!
//! The crate replays a git history, computes the Shannon entropy of each
//! touched file's AST-edge distribution and word distribution (under three
//! tokenization modes, raw and normalized), and accumulates project totals.
//! Analytics and report modules turn the resulting series into correlation
//! matrices, outlier reports, CSV/JSON files, and SVG plots.

pub mod analytics;
pub mod ast;
pub mod config;
pub mod error;
pub mod fixture;
pub mod histogram;
pub mod history;
pub mod metrics;
pub mod report;
pub mod tokens;

pub use ast::{Language, ParseOutcome, ParseStatus, SyntaxNode, SyntaxTree};
pub use config::{AnalysisConfig, MergePolicy};
pub use error::{FixtureError, HistogramError, MineError, ParseError, ReportError, StatsError};
pub use histogram::{EntropyValue, SymbolHistogram};
pub use history::{walk_history, AnalysisSeries, CommitRecord, FileSnapshot};
pub use metrics::{Metric, MetricValues};
pub use tokens::{StopList, TokenizationMode};
