//! Readers and writers for the on-disk inputs.
//!
//! Every file is UTF-8, tab-separated, LF-terminated, and starts with an exact
//! header line. Rows whose column count differs from the header are rejected,
//! and every error carries the 1-based line number (the header is line 1).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{ModelError, ParseError, ParseErrorKind};
use crate::model::{LanguagePair, MetricSpec, Registry, Score, ScoreRecord, SystemCategory, SystemEntry, Withdrawal};

pub const REGISTRY_HEADER: [&str; 4] = ["system", "category", "withdrawn", "unsupported_pairs"];
pub const SCORES_HEADER: [&str; 4] = ["pair", "system", "metric", "score"];
pub const MANIFEST_HEADER: [&str; 3] = ["pair", "segments", "words"];
pub const ALLOW_LIST_HEADER: [&str; 2] = ["pair", "system"];

/// Split `text` into data rows after checking the header.
fn tsv_rows<'a, const N: usize>(text: &'a str, header: &[&str; N]) -> Result<Vec<(usize, [&'a str; N])>, ParseError> {
    let expected = header.join("\t");
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().filter(|(_, l)| !l.is_empty()).ok_or_else(|| {
        ParseError::new(
            1,
            ParseErrorKind::MissingHeader {
                expected: expected.clone(),
            },
        )
    })?;
    if first.contains('\r') {
        return Err(ParseError::new(1, ParseErrorKind::CarriageReturn));
    }
    if first != expected {
        return Err(ParseError::new(
            1,
            ParseErrorKind::BadHeader {
                expected,
                found: first.to_string(),
            },
        ));
    }

    let ends_with_newline = text.ends_with('\n');
    let mut rows = Vec::new();
    let mut lines = lines.peekable();
    while let Some((number, line)) = lines.next() {
        // The empty string after a trailing LF is not a row.
        if line.is_empty() && ends_with_newline && lines.peek().is_none() {
            break;
        }
        if line.contains('\r') {
            return Err(ParseError::new(number, ParseErrorKind::CarriageReturn));
        }
        let cells: Vec<&str> = line.split('\t').collect();
        let cells: [&str; N] = cells.try_into().map_err(|cells: Vec<&str>| {
            ParseError::new(
                number,
                ParseErrorKind::ColumnCount {
                    expected: N,
                    found: cells.len(),
                },
            )
        })?;
        rows.push((number, cells));
    }
    Ok(rows)
}

fn parse_pair(token: &str, line: usize) -> Result<LanguagePair, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, ParseErrorKind::BadPair(token.to_string())))
}

fn parse_pair_list(token: &str, line: usize) -> Result<BTreeSet<LanguagePair>, ParseError> {
    if token.is_empty() {
        return Ok(BTreeSet::new());
    }
    token.split(',').map(|p| parse_pair(p, line)).collect()
}

/// Parse a system registry.
///
/// The `withdrawn` column is `0`, `1`, or a comma-separated list of pair codes
/// for a system withdrawn only in those directions.
pub fn parse_registry(text: &str) -> Result<Registry, ParseError> {
    let mut entries = Vec::new();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (line, [name, category, withdrawn, unsupported]) in tsv_rows(text, &REGISTRY_HEADER)? {
        if name.is_empty() {
            return Err(ParseError::new(line, ParseErrorKind::EmptyName));
        }
        if let Some(&first_line) = seen.get(name) {
            return Err(ParseError::new(
                line,
                ParseErrorKind::DuplicateSystem {
                    name: name.to_string(),
                    first_line,
                },
            ));
        }
        seen.insert(name, line);

        let category: SystemCategory = category
            .parse()
            .map_err(|_| ParseError::new(line, ParseErrorKind::UnknownCategory(category.to_string())))?;
        let withdrawal = match withdrawn {
            "0" => Withdrawal::None,
            "1" => Withdrawal::Everywhere,
            "" => return Err(ParseError::new(line, ParseErrorKind::BadWithdrawn(String::new()))),
            list => Withdrawal::Pairs(
                parse_pair_list(list, line)
                    .map_err(|_| ParseError::new(line, ParseErrorKind::BadWithdrawn(list.to_string())))?,
            ),
        };
        entries.push(SystemEntry {
            name: name.to_string(),
            category,
            withdrawal,
            unsupported_pairs: parse_pair_list(unsupported, line)?,
        });
    }
    // Uniqueness is already checked with line numbers above.
    Ok(Registry::new(entries).expect("registry invariants checked while parsing"))
}

fn join_pairs(pairs: &BTreeSet<LanguagePair>) -> String {
    pairs.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_registry(registry: &Registry) -> String {
    let mut out = REGISTRY_HEADER.join("\t");
    out.push('\n');
    for entry in registry.iter() {
        let withdrawn = match &entry.withdrawal {
            Withdrawal::None => "0".to_string(),
            Withdrawal::Everywhere => "1".to_string(),
            Withdrawal::Pairs(pairs) => join_pairs(pairs),
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            entry.name,
            entry.category,
            withdrawn,
            join_pairs(&entry.unsupported_pairs)
        ));
    }
    out
}

/// Parse system-level scores, resolving systems and metrics.
pub fn parse_scores(text: &str, registry: &Registry, metrics: &[MetricSpec]) -> Result<Vec<ScoreRecord>, ParseError> {
    let mut records = Vec::new();
    let mut seen: HashMap<(LanguagePair, &str, &str), usize> = HashMap::new();
    for (line, [pair, system, metric, score]) in tsv_rows(text, &SCORES_HEADER)? {
        let pair = parse_pair(pair, line)?;
        if registry.get(system).is_none() {
            return Err(ParseError::new(line, ParseErrorKind::UnknownSystem(system.to_string())));
        }
        if !metrics.iter().any(|m| m.id == metric) {
            return Err(ParseError::new(line, ParseErrorKind::UnknownMetric(metric.to_string())));
        }
        if let Some(&first_line) = seen.get(&(pair, system, metric)) {
            return Err(ParseError::new(
                line,
                ParseErrorKind::DuplicateScore {
                    pair: pair.to_string(),
                    system: system.to_string(),
                    metric: metric.to_string(),
                    first_line,
                },
            ));
        }
        seen.insert((pair, system, metric), line);
        let score = Score::parse(score).map_err(|e| {
            let kind = match e {
                ModelError::NonFiniteScore(s) => ParseErrorKind::NonFiniteScore(s),
                _ => ParseErrorKind::BadScore(score.to_string()),
            };
            ParseError::new(line, kind)
        })?;
        records.push(ScoreRecord {
            pair,
            system: system.to_string(),
            metric: metric.to_string(),
            score,
        });
    }
    Ok(records)
}

pub fn write_scores(records: &[ScoreRecord]) -> String {
    let mut out = SCORES_HEADER.join("\t");
    out.push('\n');
    for r in records {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", r.pair, r.system, r.metric, r.score));
    }
    out
}

/// Which systems take part in a pair and which scores they lack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub pair: LanguagePair,
    /// Systems with at least one record for the pair, in registry order.
    pub participants: Vec<String>,
    /// Participants lacking one or more metrics, with the missing metric ids.
    pub missing: Vec<(String, Vec<String>)>,
}

impl CompletenessReport {
    pub fn is_rankable(&self) -> bool {
        self.missing.is_empty()
    }
}

pub fn check_completeness(
    records: &[ScoreRecord],
    registry: &Registry,
    metrics: &[MetricSpec],
    pair: LanguagePair,
) -> CompletenessReport {
    let mut present: HashMap<&str, BTreeSet<&str>> = HashMap::new();
    for r in records.iter().filter(|r| r.pair == pair) {
        present.entry(r.system.as_str()).or_default().insert(r.metric.as_str());
    }
    let mut participants = Vec::new();
    let mut missing = Vec::new();
    for entry in registry.iter() {
        let Some(have) = present.get(entry.name.as_str()) else {
            continue;
        };
        participants.push(entry.name.clone());
        let lacking: Vec<String> = metrics
            .iter()
            .filter(|m| !have.contains(m.id.as_str()))
            .map(|m| m.id.clone())
            .collect();
        if !lacking.is_empty() {
            missing.push((entry.name.clone(), lacking));
        }
    }
    CompletenessReport {
        pair,
        participants,
        missing,
    }
}

/// Pairs that have at least one score, in canonical order.
pub fn pairs_in(records: &[ScoreRecord]) -> BTreeSet<LanguagePair> {
    records.iter().map(|r| r.pair).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ManifestEntry {
    pub segments: u64,
    /// Informational only.
    pub words: u64,
}

/// Expected test-set size per pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: BTreeMap<LanguagePair, ManifestEntry>,
}

fn parse_count(token: &str, line: usize) -> Result<u64, ParseError> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::new(line, ParseErrorKind::BadCount(token.to_string())));
    }
    token
        .parse()
        .map_err(|_| ParseError::new(line, ParseErrorKind::BadCount(token.to_string())))
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ParseError> {
    let mut entries = BTreeMap::new();
    for (line, [pair, segments, words]) in tsv_rows(text, &MANIFEST_HEADER)? {
        let pair = parse_pair(pair, line)?;
        let segments = parse_count(segments, line)?;
        if segments == 0 {
            return Err(ParseError::new(line, ParseErrorKind::NonPositiveSegments));
        }
        let words = parse_count(words, line)?;
        if entries.insert(pair, ManifestEntry { segments, words }).is_some() {
            return Err(ParseError::new(line, ParseErrorKind::DuplicatePair(pair.to_string())));
        }
    }
    Ok(Manifest { entries })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestDeviation {
    pub pair: LanguagePair,
    pub expected: u64,
    /// `None` when no count was observed for a listed pair.
    pub observed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestReport {
    pub checked: usize,
    pub deviations: Vec<ManifestDeviation>,
}

impl ManifestReport {
    pub fn passed(&self) -> bool {
        self.deviations.is_empty()
    }
}

/// Compare observed segment counts against the manifest.
///
/// A pair fails when `|observed - expected| / expected > tolerance`, or when
/// it is listed but has no observation. Observed pairs missing from the
/// manifest are ignored.
pub fn validate_manifest(
    manifest: &Manifest,
    observed: &BTreeMap<LanguagePair, u64>,
    tolerance: f64,
) -> ManifestReport {
    let deviations = manifest
        .entries
        .iter()
        .filter_map(|(&pair, entry)| {
            let seen = observed.get(&pair).copied();
            let ok = seen.is_some_and(|count| {
                let diff = count.abs_diff(entry.segments) as f64;
                diff / entry.segments as f64 <= tolerance
            });
            (!ok).then_some(ManifestDeviation {
                pair,
                expected: entry.segments,
                observed: seen,
            })
        })
        .collect();
    ManifestReport {
        checked: manifest.entries.len(),
        deviations,
    }
}

/// `(pair, system)` entries exempt from exact selection comparison.
pub fn parse_allow_list(text: &str) -> Result<BTreeSet<(LanguagePair, String)>, ParseError> {
    tsv_rows(text, &ALLOW_LIST_HEADER)?
        .into_iter()
        .map(|(line, [pair, system])| Ok((parse_pair(pair, line)?, system.to_string())))
        .collect()
}
