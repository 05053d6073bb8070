use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HistogramError {
    #[error("symbol {0:?} occurs in the file but not in the context")]
    SymbolAbsentFromContext(String),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("unsupported language: {0}")]
    UnsupportedLanguage(String),
    #[error("failed to load grammar: {0}")]
    Grammar(String),
}

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("input lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("correlation {0} is outside [-1, 1]")]
    OutOfRange(f64),
    #[error("outlier factor must be positive, got {0}")]
    BadFactor(f64),
}

#[derive(Debug, Error)]
pub enum MineError {
    #[error("{path}: not a readable git repository")]
    Unreadable {
        path: PathBuf,
        #[source]
        source: git2::Error,
    },
    #[error("{0}: repository has no commits")]
    EmptyRepository(PathBuf),
    #[error(transparent)]
    Git(#[from] git2::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed series at line {line}: {message}")]
    MalformedSeries { line: usize, message: String },
    #[error("malformed labels at line {line}: {message}")]
    MalformedLabels { line: usize, message: String },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error(transparent)]
    Git(#[from] git2::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}: target directory is not empty")]
    NotEmpty(PathBuf),
}
