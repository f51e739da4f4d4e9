//! Domain types shared by ingest, ranking, selection and rendering.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ConfigError, ModelError};

/// An ordered translation direction such as `en-de`.
///
/// Both sides are two-letter lowercase ISO-639-1 codes. Ordering follows the
/// canonical textual form, so a `BTreeMap<LanguagePair, _>` iterates in the
/// same order as a sort on the `<source>-<target>` strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguagePair {
    source: [u8; 2],
    target: [u8; 2],
}

impl LanguagePair {
    pub fn new(source: &str, target: &str) -> Result<Self, ModelError> {
        let malformed = || ModelError::MalformedPair(format!("{source}-{target}"));
        let src = iso_code(source).ok_or_else(malformed)?;
        let tgt = iso_code(target).ok_or_else(malformed)?;
        if src == tgt {
            return Err(ModelError::SameLanguage(format!("{source}-{target}")));
        }
        Ok(Self {
            source: src,
            target: tgt,
        })
    }

    pub fn source(&self) -> &str {
        // Both halves are validated ASCII at construction.
        std::str::from_utf8(&self.source).expect("ascii language code")
    }

    pub fn target(&self) -> &str {
        std::str::from_utf8(&self.target).expect("ascii language code")
    }
}

fn iso_code(code: &str) -> Option<[u8; 2]> {
    match code.as_bytes() {
        &[a, b] if a.is_ascii_lowercase() && b.is_ascii_lowercase() => Some([a, b]),
        _ => None,
    }
}

impl fmt::Display for LanguagePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.source(), self.target())
    }
}

impl FromStr for LanguagePair {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (source, target) = s
            .split_once('-')
            .ok_or_else(|| ModelError::MalformedPair(s.to_string()))?;
        Self::new(source, target).map_err(|e| match e {
            ModelError::SameLanguage(_) => ModelError::SameLanguage(s.to_string()),
            _ => ModelError::MalformedPair(s.to_string()),
        })
    }
}

impl Serialize for LanguagePair {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LanguagePair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Shared-task category of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemCategory {
    /// Only the allowed training data and pretrained models.
    Constrained,
    /// Openly licensed weights and data.
    Open,
    /// Everything else, including online systems.
    Closed,
}

impl SystemCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            SystemCategory::Constrained => "constrained",
            SystemCategory::Open => "open",
            SystemCategory::Closed => "closed",
        }
    }
}

impl FromStr for SystemCategory {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "constrained" => Ok(SystemCategory::Constrained),
            "open" => Ok(SystemCategory::Open),
            "closed" => Ok(SystemCategory::Closed),
            other => Err(ModelError::UnknownCategory(other.to_string())),
        }
    }
}

impl fmt::Display for SystemCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a system has been withdrawn from human evaluation.
///
/// Withdrawal is usually global, but a submission can be pulled for a single
/// direction while still being evaluated elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Withdrawal {
    #[default]
    None,
    Everywhere,
    Pairs(BTreeSet<LanguagePair>),
}

impl Withdrawal {
    pub fn applies_to(&self, pair: LanguagePair) -> bool {
        match self {
            Withdrawal::None => false,
            Withdrawal::Everywhere => true,
            Withdrawal::Pairs(pairs) => pairs.contains(&pair),
        }
    }
}

/// A participating system as listed in the registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemEntry {
    pub name: String,
    pub category: SystemCategory,
    pub withdrawal: Withdrawal,
    /// Pairs whose languages the system's documentation does not claim.
    pub unsupported_pairs: BTreeSet<LanguagePair>,
}

impl SystemEntry {
    pub fn new(name: impl Into<String>, category: SystemCategory) -> Self {
        Self {
            name: name.into(),
            category,
            withdrawal: Withdrawal::None,
            unsupported_pairs: BTreeSet::new(),
        }
    }

    pub fn withdrawn(mut self) -> Self {
        self.withdrawal = Withdrawal::Everywhere;
        self
    }

    pub fn is_withdrawn(&self, pair: LanguagePair) -> bool {
        self.withdrawal.applies_to(pair)
    }

    pub fn claims_support(&self, pair: LanguagePair) -> bool {
        !self.unsupported_pairs.contains(&pair)
    }
}

/// Systems with unique names, in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    entries: Vec<SystemEntry>,
    index: HashMap<String, usize>,
}

impl Registry {
    pub fn new(entries: Vec<SystemEntry>) -> Result<Self, ModelError> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, entry) in entries.iter().enumerate() {
            if entry.name.is_empty() {
                return Err(ModelError::EmptyName);
            }
            if index.insert(entry.name.clone(), i).is_some() {
                return Err(ModelError::DuplicateSystem(entry.name.clone()));
            }
        }
        Ok(Self { entries, index })
    }

    pub fn get(&self, name: &str) -> Option<&SystemEntry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn entries(&self) -> &[SystemEntry] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SystemEntry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    LowerBetter,
    HigherBetter,
}

impl Orientation {
    pub fn arrow(self) -> &'static str {
        match self {
            Orientation::LowerBetter => "↓",
            Orientation::HigherBetter => "↑",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MetricSpec {
    pub id: String,
    pub display_name: String,
    pub orientation: Orientation,
}

impl MetricSpec {
    pub fn new(id: impl Into<String>, display_name: impl Into<String>, orientation: Orientation) -> Self {
        Self {
            id: id.into(),
            display_name: display_name.into(),
            orientation,
        }
    }

    /// Reference-based MetricX-23-XL; lower is better.
    pub fn metricx_23_xl() -> Self {
        Self::new("metricx-23-xl", "MetricX", Orientation::LowerBetter)
    }

    /// Reference-free CometKiwi-DA-XL; higher is better.
    pub fn cometkiwi_da_xl() -> Self {
        Self::new("cometkiwi-da-xl", "CometKiwi", Orientation::HigherBetter)
    }

    /// The two metrics averaged by AutoRank, in column order.
    pub fn autorank_pair() -> Vec<Self> {
        vec![Self::metricx_23_xl(), Self::cometkiwi_da_xl()]
    }
}

/// A metric value as read from disk.
///
/// The numeric value drives every computation; the literal is kept so that
/// files round-trip byte for byte and tables print scores as they were given
/// (`0.690` stays `0.690`).
#[derive(Debug, Clone, PartialEq)]
pub struct Score {
    value: f64,
    literal: Box<str>,
}

impl Score {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let value: f64 = text.parse().map_err(|_| ModelError::InvalidScore(text.to_string()))?;
        if !value.is_finite() {
            return Err(ModelError::NonFiniteScore(text.to_string()));
        }
        Ok(Self {
            value,
            literal: text.into(),
        })
    }

    pub fn from_value(value: f64) -> Result<Self, ModelError> {
        if !value.is_finite() {
            return Err(ModelError::NonFiniteScore(value.to_string()));
        }
        Ok(Self {
            value,
            literal: format_real(value).into(),
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_str(&self) -> &str {
        &self.literal
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal)
    }
}

/// Shortest decimal text that parses back to the same `f64`.
pub fn format_real(value: f64) -> String {
    format!("{value:?}")
}

/// One `(pair, system, metric, score)` observation.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord {
    pub pair: LanguagePair,
    pub system: String,
    pub metric: String,
    pub score: Score,
}

/// Width of the rank scale that metric scores are stretched onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleSpan {
    /// Best maps to 1, worst to `1 + N`. Matches the published tables.
    #[default]
    SpanN,
    /// Best maps to 1, worst to `N`.
    SpanNMinusOne,
}

impl ScaleSpan {
    pub fn width(self, n_systems: usize) -> f64 {
        match self {
            ScaleSpan::SpanN => n_systems as f64,
            ScaleSpan::SpanNMinusOne => n_systems.saturating_sub(1) as f64,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScaleSpan::SpanN => "n",
            ScaleSpan::SpanNMinusOne => "n-1",
        }
    }
}

impl FromStr for ScaleSpan {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "n" => Ok(ScaleSpan::SpanN),
            "n-1" => Ok(ScaleSpan::SpanNMinusOne),
            other => Err(ConfigError::UnknownSpan(other.to_string())),
        }
    }
}

/// Fraction of the field used by the category thresholds.
pub type Fraction = Ratio<u32>;

/// Parse `2/3`, `1`, or a finite decimal such as `0.25` into an exact fraction.
pub fn parse_fraction(text: &str) -> Result<Fraction, ConfigError> {
    let bad = || ConfigError::InvalidFraction(text.to_string());
    if text.contains('/') {
        let ratio: Fraction = text.parse().map_err(|_| bad())?;
        return Ok(ratio);
    }
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) || frac.len() > 9 {
        return Err(bad());
    }
    let denom = 10u32.pow(frac.len() as u32);
    let digits = format!("{whole}{frac}");
    let numer: u32 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    Ok(Ratio::new(numer, denom))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingConfig {
    /// Neighbouring AutoRank gap that must be exceeded to place the cutoff.
    pub cutoff_gap: f64,
    /// Closed systems must be within this leading share of the field.
    pub closed_fraction: Fraction,
    /// Open systems must be within this leading share of the field.
    pub open_fraction: Fraction,
    pub display_decimals: u32,
    pub scale_span: ScaleSpan,
}

impl Default for RankingConfig {
    fn default() -> Self {
        Self {
            cutoff_gap: 1.5,
            closed_fraction: Ratio::new(1, 3),
            open_fraction: Ratio::new(2, 3),
            display_decimals: 1,
            scale_span: ScaleSpan::SpanN,
        }
    }
}

impl RankingConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.cutoff_gap.is_finite() && self.cutoff_gap > 0.0) {
            return Err(ConfigError::CutoffGap(self.cutoff_gap));
        }
        let zero = Ratio::from_integer(0);
        let one = Ratio::from_integer(1);
        if !(zero < self.closed_fraction && self.closed_fraction <= self.open_fraction && self.open_fraction <= one) {
            return Err(ConfigError::Fractions {
                closed: self.closed_fraction.to_string(),
                open: self.open_fraction.to_string(),
            });
        }
        if self.display_decimals > 6 {
            return Err(ConfigError::DisplayDecimals(self.display_decimals));
        }
        Ok(())
    }
}

/// Why a row was or was not selected for human evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonCode {
    SelectedConstrained,
    SelectedOpenTopTwoThirds,
    SelectedClosedTopThird,
    ExcludedClosedBelowThird,
    ExcludedOpenBelowTwoThirds,
    ExcludedBelowCutoff,
    ExcludedWithdrawn,
}

impl ReasonCode {
    pub fn is_selection(self) -> bool {
        matches!(
            self,
            ReasonCode::SelectedConstrained | ReasonCode::SelectedOpenTopTwoThirds | ReasonCode::SelectedClosedTopThird
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReasonCode::SelectedConstrained => "selected_constrained",
            ReasonCode::SelectedOpenTopTwoThirds => "selected_open_top_two_thirds",
            ReasonCode::SelectedClosedTopThird => "selected_closed_top_third",
            ReasonCode::ExcludedClosedBelowThird => "excluded_closed_below_third",
            ReasonCode::ExcludedOpenBelowTwoThirds => "excluded_open_below_two_thirds",
            ReasonCode::ExcludedBelowCutoff => "excluded_below_cutoff",
            ReasonCode::ExcludedWithdrawn => "excluded_withdrawn",
        }
    }
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Computed state of one system within one language pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedRow {
    pub system: SystemEntry,
    /// Withdrawal resolved for this row's pair.
    pub withdrawn: bool,
    /// The system does not claim support for this row's pair.
    pub unsupported: bool,
    pub raw_scores: BTreeMap<String, Score>,
    /// Per-metric rank units in `[1, 1 + N]`.
    pub normalized: BTreeMap<String, f64>,
    pub autorank_exact: f64,
    pub autorank_display: f64,
    /// 1-based; 0 until [`crate::autorank::order_rows`] runs.
    pub position: usize,
    pub above_cutoff: bool,
    pub selected: bool,
    pub reasons: Vec<ReasonCode>,
}

impl RankedRow {
    pub fn name(&self) -> &str {
        &self.system.name
    }

    pub fn category(&self) -> SystemCategory {
        self.system.category
    }
}

/// Ordered, selected rows for one language pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderboardTable {
    pub pair: LanguagePair,
    pub metrics: Vec<MetricSpec>,
    pub config: RankingConfig,
    pub rows: Vec<RankedRow>,
    pub cutoff_position: Option<usize>,
}

impl LeaderboardTable {
    pub fn n_systems(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, system: &str) -> Option<&RankedRow> {
        self.rows.iter().find(|r| r.system.name == system)
    }
}
