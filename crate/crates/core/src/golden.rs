//! Regression comparison of computed tables against golden JSON reports.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{LanguagePair, LeaderboardTable};
use crate::report::PairReport;

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenOptions {
    /// Largest accepted |computed - golden| on the displayed AutoRank.
    pub autorank_tol: f64,
    /// `(pair, system)` whose selection flag may differ.
    pub allow_mismatch: BTreeSet<(LanguagePair, String)>,
}

impl Default for GoldenOptions {
    fn default() -> Self {
        Self {
            autorank_tol: 0.05,
            allow_mismatch: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Field {
    MissingSystem,
    UnexpectedSystem,
    AutorankDisplay,
    Position,
    Selected,
    CutoffPosition,
    SystemCount,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::MissingSystem => "missing_system",
            Field::UnexpectedSystem => "unexpected_system",
            Field::AutorankDisplay => "autorank_display",
            Field::Position => "position",
            Field::Selected => "selected",
            Field::CutoffPosition => "cutoff_position",
            Field::SystemCount => "n_systems",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub pair: LanguagePair,
    /// `None` for table-level fields.
    pub system: Option<String>,
    pub field: Field,
    pub expected: String,
    pub actual: String,
    /// Listed in the allow-list; reported but not a failure.
    pub allowed: bool,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\texpected={}\tactual={}{}",
            self.pair,
            self.system.as_deref().unwrap_or("-"),
            self.field.as_str(),
            self.expected,
            self.actual,
            if self.allowed { "\t(allowed)" } else { "" }
        )
    }
}

fn opt(p: Option<usize>) -> String {
    p.map_or_else(|| "none".to_string(), |p| p.to_string())
}

/// Every difference between `golden` and `actual` that matters for regression.
pub fn compare_pair(golden: &PairReport, actual: &LeaderboardTable, opts: &GoldenOptions) -> Vec<Mismatch> {
    let pair = golden.pair;
    let mut out = Vec::new();
    let mut push = |system: Option<&str>, field, expected: String, actual: String, allowed| {
        out.push(Mismatch {
            pair,
            system: system.map(str::to_string),
            field,
            expected,
            actual,
            allowed,
        })
    };

    if golden.n_systems != actual.n_systems() {
        push(
            None,
            Field::SystemCount,
            golden.n_systems.to_string(),
            actual.n_systems().to_string(),
            false,
        );
    }
    if golden.cutoff_position != actual.cutoff_position {
        push(
            None,
            Field::CutoffPosition,
            opt(golden.cutoff_position),
            opt(actual.cutoff_position),
            false,
        );
    }

    for expected in &golden.rows {
        let name = expected.system.as_str();
        let Some(row) = actual.row(name) else {
            push(
                Some(name),
                Field::MissingSystem,
                "present".into(),
                "absent".into(),
                false,
            );
            continue;
        };
        let shown = format!("{:.*}", actual.config.display_decimals as usize, row.autorank_display);
        let within = expected
            .autorank_display
            .parse::<f64>()
            .is_ok_and(|g| (g - row.autorank_display).abs() <= opts.autorank_tol + 1e-9);
        if !within {
            push(
                Some(name),
                Field::AutorankDisplay,
                expected.autorank_display.clone(),
                shown,
                false,
            );
        }
        if expected.position != row.position {
            push(
                Some(name),
                Field::Position,
                expected.position.to_string(),
                row.position.to_string(),
                false,
            );
        }
        if expected.selected != row.selected {
            let allowed = opts.allow_mismatch.contains(&(pair, name.to_string()));
            push(
                Some(name),
                Field::Selected,
                expected.selected.to_string(),
                row.selected.to_string(),
                allowed,
            );
        }
    }
    let known: BTreeSet<&str> = golden.rows.iter().map(|r| r.system.as_str()).collect();
    for row in actual.rows.iter().filter(|r| !known.contains(r.name())) {
        push(
            Some(row.name()),
            Field::UnexpectedSystem,
            "absent".into(),
            "present".into(),
            false,
        );
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifySummary {
    pub pairs_compared: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifySummary {
    pub fn failures(&self) -> impl Iterator<Item = &Mismatch> {
        self.mismatches.iter().filter(|m| !m.allowed)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_registry, parse_scores};
    use crate::leaderboard::rank_pair;
    use crate::model::{MetricSpec, RankingConfig};
    use crate::report::Report;

    fn table() -> LeaderboardTable {
        let registry =
            parse_registry("system\tcategory\twithdrawn\tunsupported_pairs\nA\topen\t0\t\nB\tclosed\t0\t\n").unwrap();
        let records = parse_scores(
            "pair\tsystem\tmetric\tscore\nen-de\tA\tmetricx-23-xl\t1\nen-de\tA\tcometkiwi-da-xl\t0.8\nen-de\tB\tmetricx-23-xl\t2\nen-de\tB\tcometkiwi-da-xl\t0.7\n",
            &registry,
            &MetricSpec::autorank_pair(),
        )
        .unwrap();
        rank_pair(
            "en-de".parse().unwrap(),
            &records,
            &registry,
            &MetricSpec::autorank_pair(),
            &RankingConfig::default(),
        )
        .unwrap()
    }

    fn golden_of(table: &LeaderboardTable) -> PairReport {
        Report::from_tables([table], |_| true).pairs.remove(0)
    }

    #[test]
    fn identical_report_matches() {
        let t = table();
        assert!(compare_pair(&golden_of(&t), &t, &GoldenOptions::default()).is_empty());
    }

    #[test]
    fn perturbed_autorank_is_reported() {
        let t = table();
        let mut golden = golden_of(&t);
        golden.rows[1].autorank_display = "3.2".into();
        let diff = compare_pair(&golden, &t, &GoldenOptions::default());
        assert_eq!(diff.len(), 1);
        assert_eq!(diff[0].field, Field::AutorankDisplay);
        assert_eq!(diff[0].system.as_deref(), Some("B"));
        assert_eq!(diff[0].expected, "3.2");
        assert_eq!(diff[0].actual, "3.0");
        assert_eq!(
            diff[0].to_string(),
            "en-de\tB\tautorank_display\texpected=3.2\tactual=3.0"
        );
    }

    #[test]
    fn tolerance_is_inclusive() {
        let t = table();
        let mut golden = golden_of(&t);
        golden.rows[1].autorank_display = "3.05".into();
        assert!(compare_pair(&golden, &t, &GoldenOptions::default()).is_empty());
    }

    #[test]
    fn selection_allow_list() {
        let t = table();
        let mut golden = golden_of(&t);
        golden.rows[0].selected = !golden.rows[0].selected;
        let mut opts = GoldenOptions::default();
        let diff = compare_pair(&golden, &t, &opts);
        assert!(!diff[0].allowed);
        opts.allow_mismatch.insert((t.pair, "A".into()));
        let diff = compare_pair(&golden, &t, &opts);
        assert_eq!(diff.len(), 1);
        assert!(diff[0].allowed);
        let summary = VerifySummary {
            pairs_compared: 1,
            mismatches: diff,
        };
        assert!(summary.passed());
    }

    #[test]
    fn structural_differences() {
        let t = table();
        let mut golden = golden_of(&t);
        golden.rows[0].system = "Ghost".into();
        golden.cutoff_position = None;
        let fields: Vec<Field> = compare_pair(&golden, &t, &GoldenOptions::default())
            .iter()
            .map(|m| m.field)
            .collect();
        assert_eq!(
            fields,
            [Field::CutoffPosition, Field::MissingSystem, Field::UnexpectedSystem]
        );
    }
}
