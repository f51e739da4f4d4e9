use thiserror::Error;

/// Violations of a domain-type invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed language pair `{0}` (expected two lowercase ISO-639-1 codes, e.g. `en-de`)")]
    MalformedPair(String),
    #[error("language pair `{0}` has the same source and target")]
    SameLanguage(String),
    #[error("unknown category `{0}` (expected constrained, open or closed)")]
    UnknownCategory(String),
    #[error("system name is empty")]
    EmptyName,
    #[error("duplicate system `{0}`")]
    DuplicateSystem(String),
    #[error("score `{0}` is not a number")]
    InvalidScore(String),
    #[error("score `{0}` is not finite")]
    NonFiniteScore(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cutoff gap must be positive, got {0}")]
    CutoffGap(f64),
    #[error("need 0 < closed fraction <= open fraction <= 1, got closed {closed} and open {open}")]
    Fractions { closed: String, open: String },
    #[error("display decimals must be at most 6, got {0}")]
    DisplayDecimals(u32),
    #[error("unknown scale span `{0}` (expected n or n-1)")]
    UnknownSpan(String),
    #[error("invalid fraction `{0}`")]
    InvalidFraction(String),
}

/// A rejected input line. `line` is 1-based and counts the header.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header (expected `{expected}`)")]
    MissingHeader { expected: String },
    #[error("bad header `{found}` (expected `{expected}`)")]
    BadHeader { expected: String, found: String },
    #[error("expected {expected} tab-separated columns, found {found}")]
    ColumnCount { expected: usize, found: usize },
    #[error("carriage return in line (files must use LF line endings)")]
    CarriageReturn,
    #[error("system name is empty")]
    EmptyName,
    #[error("duplicate system `{name}` (first defined on line {first_line})")]
    DuplicateSystem { name: String, first_line: usize },
    #[error("unknown category `{0}` (expected constrained, open or closed)")]
    UnknownCategory(String),
    #[error("bad withdrawn value `{0}` (expected 0, 1 or a comma-separated list of pairs)")]
    BadWithdrawn(String),
    #[error("malformed language pair `{0}`")]
    BadPair(String),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("duplicate score for ({pair}, {system}, {metric}) (first given on line {first_line})")]
    DuplicateScore {
        pair: String,
        system: String,
        metric: String,
        first_line: usize,
    },
    #[error("score `{0}` is not a number")]
    BadScore(String),
    #[error("score `{0}` is not finite")]
    NonFiniteScore(String),
    #[error("bad count `{0}` (expected a non-negative integer)")]
    BadCount(String),
    #[error("segment count must be positive")]
    NonPositiveSegments,
    #[error("duplicate pair `{0}`")]
    DuplicatePair(String),
}

/// Failures while computing a leaderboard.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RankError {
    #[error("no metrics configured")]
    NoMetrics,
    #[error("no systems to rank")]
    NoSystems,
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("score {score} for metric `{metric}` lies outside the observed range [{min}, {max}]")]
    ScoreOutOfRange {
        metric: String,
        score: f64,
        min: f64,
        max: f64,
    },
    #[error("incomplete score matrix for {pair}: {}", format_missing(.missing))]
    IncompleteScores {
        pair: String,
        missing: Vec<(String, Vec<String>)>,
    },
    #[error("no scores for pair {0}")]
    UnknownPair(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

fn format_missing(missing: &[(String, Vec<String>)]) -> String {
    missing
        .iter()
        .map(|(system, metrics)| format!("{system} lacks {}", metrics.join(", ")))
        .collect::<Vec<_>>()
        .join("; ")
}
