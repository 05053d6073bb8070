//! Natural-language word extraction from source text.
//!
//! Words are maximal alphanumeric runs split on identifier conventions
//! (snake_case, camelCase, acronyms, embedded numbers) and lowercased.
//! Three progressively stricter [`TokenizationMode`]s filter the stream.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::histogram::SymbolHistogram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenizationMode {
    Full,
    NoKeywords,
    NoKeywordsNoNumbers,
}

impl TokenizationMode {
    pub const ALL: [TokenizationMode; 3] = [
        TokenizationMode::Full,
        TokenizationMode::NoKeywords,
        TokenizationMode::NoKeywordsNoNumbers,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Short suffix used in column names (`full`, `nokw`, `nokwnum`).
    pub fn short_name(self) -> &'static str {
        match self {
            TokenizationMode::Full => "full",
            TokenizationMode::NoKeywords => "nokw",
            TokenizationMode::NoKeywordsNoNumbers => "nokwnum",
        }
    }
}

impl fmt::Display for TokenizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TokenizationMode::Full => "FULL",
            TokenizationMode::NoKeywords => "NO_KEYWORDS",
            TokenizationMode::NoKeywordsNoNumbers => "NO_KEYWORDS_NO_NUMBERS",
        })
    }
}

/// Java reserved words, reserved literals, and `string`.
const JAVA_STOPWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
    "true",
    "false",
    "null",
    "string",
];

/// Words removed by the keyword-filtering modes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopList {
    keywords: BTreeSet<String>,
}

impl StopList {
    pub fn java() -> Self {
        JAVA_STOPWORDS.iter().copied().collect()
    }

    /// Reads a stoplist file: one word per line, `#` starts a comment.
    pub fn from_file(path: &Path) -> std::io::Result<Self> {
        Ok(Self::parse_text(&std::fs::read_to_string(path)?))
    }

    pub fn parse_text(text: &str) -> Self {
        text.lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|w| !w.is_empty())
            .collect()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.keywords.contains(word)
    }

    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.keywords.iter().map(String::as_str)
    }
}

impl Default for StopList {
    fn default() -> Self {
        Self::java()
    }
}

impl<S: AsRef<str>> FromIterator<S> for StopList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self {
            keywords: iter
                .into_iter()
                .map(|s| s.as_ref().to_lowercase())
                .collect(),
        }
    }
}

impl FromStr for StopList {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::parse_text(s))
    }
}

/// Splits source text into lowercase words in order of appearance.
pub fn extract_words(text: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut run: Vec<char> = Vec::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            run.push(ch);
        } else if !run.is_empty() {
            split_run(&run, &mut words);
            run.clear();
        }
    }
    if !run.is_empty() {
        split_run(&run, &mut words);
    }
    words
}

fn split_run(run: &[char], out: &mut Vec<String>) {
    let mut start = 0;
    for i in 1..run.len() {
        let prev = run[i - 1];
        let cur = run[i];
        let next = run.get(i + 1).copied();
        let boundary = (prev.is_lowercase() && cur.is_uppercase())
            || (prev.is_numeric() != cur.is_numeric())
            || (prev.is_uppercase() && cur.is_uppercase() && next.is_some_and(char::is_lowercase));
        if boundary {
            out.push(lowercase(&run[start..i]));
            start = i;
        }
    }
    out.push(lowercase(&run[start..]));
}

fn lowercase(chars: &[char]) -> String {
    chars.iter().flat_map(|c| c.to_lowercase()).collect()
}

/// Filters a lowercase word stream according to `mode`, preserving order.
pub fn apply_mode(tokens: &[String], mode: TokenizationMode, stoplist: &StopList) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| keep(t, mode, stoplist))
        .cloned()
        .collect()
}

fn keep(token: &str, mode: TokenizationMode, stoplist: &StopList) -> bool {
    match mode {
        TokenizationMode::Full => true,
        TokenizationMode::NoKeywords => !stoplist.contains(token),
        TokenizationMode::NoKeywordsNoNumbers => {
            !stoplist.contains(token) && !token.chars().all(|c| c.is_numeric())
        }
    }
}

pub fn token_histogram<S: AsRef<str>>(tokens: &[S]) -> SymbolHistogram {
    tokens.iter().map(|t| t.as_ref()).collect()
}

/// The three mode histograms of `text`, indexed by [`TokenizationMode::index`].
pub fn mode_histograms(text: &str, stoplist: &StopList) -> [SymbolHistogram; 3] {
    let words = extract_words(text);
    TokenizationMode::ALL.map(|mode| {
        words
            .iter()
            .filter(|w| keep(w, mode, stoplist))
            .map(String::as_str)
            .collect()
    })
}

/// Replaces Java comments with spaces, leaving string and character
/// literals intact.
pub fn strip_comments(text: &str) -> String {
    enum State {
        Code,
        Line,
        Block,
        Str,
        TextBlock,
        Char,
    }
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut state = State::Code;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match state {
            State::Code => match (c, next) {
                ('/', Some('/')) => {
                    state = State::Line;
                    out.push(' ');
                    i += 1;
                }
                ('/', Some('*')) => {
                    state = State::Block;
                    out.push(' ');
                    i += 1;
                }
                ('"', _) if chars.get(i + 1..i + 3) == Some(&['"', '"']) => {
                    state = State::TextBlock;
                    out.push_str("\"\"\"");
                    i += 2;
                }
                ('"', _) => {
                    state = State::Str;
                    out.push(c);
                }
                ('\'', _) => {
                    state = State::Char;
                    out.push(c);
                }
                _ => out.push(c),
            },
            State::Line => {
                if c == '\n' {
                    state = State::Code;
                    out.push('\n');
                }
            }
            State::Block => {
                if c == '*' && next == Some('/') {
                    state = State::Code;
                    i += 1;
                } else if c == '\n' {
                    out.push('\n');
                }
            }
            State::Str | State::Char | State::TextBlock => {
                out.push(c);
                if c == '\\' {
                    if let Some(n) = next {
                        out.push(n);
                        i += 1;
                    }
                } else {
                    let closed = match state {
                        State::Str => c == '"' || c == '\n',
                        State::Char => c == '\'' || c == '\n',
                        _ => c == '"' && chars.get(i + 1..i + 3) == Some(&['"', '"']),
                    };
                    if closed {
                        if matches!(state, State::TextBlock) {
                            out.push_str("\"\"");
                            i += 2;
                        }
                        state = State::Code;
                    }
                }
            }
        }
        i += 1;
    }
    out
}
