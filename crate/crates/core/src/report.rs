//! Machine-readable JSON report.
//!
//! Reals are written as decimal strings so that output never depends on a
//! JSON library's float formatting: raw scores keep their input text,
//! computed values use the shortest representation that parses back to the
//! same `f64`. Pairs are sorted by code and rows by position, and the
//! serialization is pretty-printed with a trailing newline, so identical
//! inputs give identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{
    format_real, parse_fraction, LanguagePair, LeaderboardTable, MetricSpec, Orientation, RankedRow, RankingConfig,
    ReasonCode, ScaleSpan, SystemCategory,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ConfigReport,
    pub metrics: Vec<MetricReport>,
    pub pairs: Vec<PairReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigReport {
    pub cutoff_gap: String,
    pub closed_fraction: String,
    pub open_fraction: String,
    pub display_decimals: u32,
    pub scale_span: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub id: String,
    pub display_name: String,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub pair: LanguagePair,
    pub n_systems: usize,
    pub cutoff_position: Option<usize>,
    pub rows: Vec<RowReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub position: usize,
    pub system: String,
    pub category: SystemCategory,
    pub withdrawn: bool,
    pub unsupported: bool,
    pub scores: BTreeMap<String, String>,
    pub normalized: BTreeMap<String, String>,
    pub autorank_exact: String,
    pub autorank_display: String,
    pub above_cutoff: bool,
    pub selected: bool,
    pub reasons: Vec<ReasonCode>,
}

impl ConfigReport {
    pub fn from_config(config: &RankingConfig) -> Self {
        Self {
            cutoff_gap: format_real(config.cutoff_gap),
            closed_fraction: config.closed_fraction.to_string(),
            open_fraction: config.open_fraction.to_string(),
            display_decimals: config.display_decimals,
            scale_span: config.scale_span.as_str().to_string(),
        }
    }

    /// The configuration this echo describes, if it is well formed.
    pub fn to_config(&self) -> Option<RankingConfig> {
        let config = RankingConfig {
            cutoff_gap: self.cutoff_gap.parse().ok()?,
            closed_fraction: parse_fraction(&self.closed_fraction).ok()?,
            open_fraction: parse_fraction(&self.open_fraction).ok()?,
            display_decimals: self.display_decimals,
            scale_span: self.scale_span.parse::<ScaleSpan>().ok()?,
        };
        config.validate().ok()?;
        Some(config)
    }
}

impl MetricReport {
    pub fn to_spec(&self) -> MetricSpec {
        MetricSpec::new(self.id.clone(), self.display_name.clone(), self.orientation)
    }
}

impl RowReport {
    pub fn from_row(row: &RankedRow, decimals: u32) -> Self {
        Self {
            position: row.position,
            system: row.system.name.clone(),
            category: row.system.category,
            withdrawn: row.withdrawn,
            unsupported: row.unsupported,
            scores: row
                .raw_scores
                .iter()
                .map(|(k, v)| (k.clone(), v.as_str().to_string()))
                .collect(),
            normalized: row
                .normalized
                .iter()
                .map(|(k, &v)| (k.clone(), format_real(v)))
                .collect(),
            autorank_exact: format_real(row.autorank_exact),
            autorank_display: format!("{:.*}", decimals as usize, row.autorank_display),
            above_cutoff: row.above_cutoff,
            selected: row.selected,
            reasons: row.reasons.clone(),
        }
    }
}

impl PairReport {
    /// Report the rows accepted by `keep`; `n_systems` always counts the full field.
    pub fn from_table(table: &LeaderboardTable, keep: impl Fn(&RankedRow) -> bool) -> Self {
        Self {
            pair: table.pair,
            n_systems: table.n_systems(),
            cutoff_position: table.cutoff_position,
            rows: table
                .rows
                .iter()
                .filter(|r| keep(r))
                .map(|r| RowReport::from_row(r, table.config.display_decimals))
                .collect(),
        }
    }
}

impl Report {
    /// Build a report; the echoed config and metrics come from the first table.
    pub fn from_tables<'a>(
        tables: impl IntoIterator<Item = &'a LeaderboardTable>,
        keep: impl Fn(&RankedRow) -> bool,
    ) -> Self {
        let mut tables: Vec<&LeaderboardTable> = tables.into_iter().collect();
        tables.sort_by_key(|t| t.pair);
        let (config, metrics) = match tables.first() {
            Some(t) => (t.config.clone(), t.metrics.clone()),
            None => (RankingConfig::default(), Vec::new()),
        };
        Self {
            config: ConfigReport::from_config(&config),
            metrics: metrics
                .iter()
                .map(|m| MetricReport {
                    id: m.id.clone(),
                    display_name: m.display_name.clone(),
                    orientation: m.orientation,
                })
                .collect(),
            pairs: tables.iter().map(|t| PairReport::from_table(t, &keep)).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// Serialize all tables into one JSON document.
pub fn render_report(tables: &[LeaderboardTable]) -> String {
    Report::from_tables(tables, |_| true).to_json()
}
