//! Human-evaluation selection: the quality cutoff plus the per-category
//! position limits.

use num_rational::Ratio;

use crate::model::{RankedRow, RankingConfig, ReasonCode, SystemCategory};

/// Position of the first row below the cutoff line, if there is one.
///
/// The cutoff sits at the first neighbouring pair whose exact AutoRank gap
/// is strictly larger than `config.cutoff_gap`. Withdrawn rows keep their
/// places and take part in the gap computation. `ordered` must already be
/// sorted by position.
pub fn find_cutoff(ordered: &[RankedRow], config: &RankingConfig) -> Option<usize> {
    ordered
        .windows(2)
        .position(|w| w[1].autorank_exact - w[0].autorank_exact > config.cutoff_gap)
        .map(|i| i + 2)
}

/// Highest position a closed system may hold: `ceil(N * closed_fraction)`.
pub fn closed_limit(n_systems: usize, config: &RankingConfig) -> usize {
    (Ratio::from_integer(n_systems as u64) * widen(config.closed_fraction))
        .ceil()
        .to_integer() as usize
}

/// Highest position an open system may hold: `floor(N * open_fraction)`.
pub fn open_limit(n_systems: usize, config: &RankingConfig) -> usize {
    (Ratio::from_integer(n_systems as u64) * widen(config.open_fraction))
        .floor()
        .to_integer() as usize
}

fn widen(r: Ratio<u32>) -> Ratio<u64> {
    Ratio::new(u64::from(*r.numer()), u64::from(*r.denom()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub system: String,
    pub position: usize,
    pub above_cutoff: bool,
    pub selected: bool,
    pub reasons: Vec<ReasonCode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionOutcome {
    pub cutoff_position: Option<usize>,
    pub closed_limit: usize,
    pub open_limit: usize,
    /// One decision per row, in row order.
    pub decisions: Vec<Decision>,
}

impl SelectionOutcome {
    /// Copy cutoff and selection state onto the rows it was computed from.
    pub fn apply(&self, rows: &mut [RankedRow]) {
        for (row, decision) in rows.iter_mut().zip(&self.decisions) {
            debug_assert_eq!(row.system.name, decision.system);
            row.above_cutoff = decision.above_cutoff;
            row.selected = decision.selected;
            row.reasons = decision.reasons.clone();
        }
    }

    pub fn selected(&self) -> impl Iterator<Item = &Decision> {
        self.decisions.iter().filter(|d| d.selected)
    }
}

/// Decide which rows go to human evaluation.
///
/// A row is selected iff it is not withdrawn, sits above the cutoff, and is
/// either constrained, open within the open limit, or closed within the
/// closed limit. Excluded rows list every rule they fail.
pub fn select_for_human_eval(ordered: &[RankedRow], cutoff: Option<usize>, config: &RankingConfig) -> SelectionOutcome {
    let n = ordered.len();
    let closed = closed_limit(n, config);
    let open = open_limit(n, config);
    let decisions = ordered
        .iter()
        .map(|row| {
            let above_cutoff = cutoff.is_none_or(|p| row.position < p);
            let mut excluded = Vec::new();
            let admitted = match row.category() {
                SystemCategory::Constrained => Some(ReasonCode::SelectedConstrained),
                SystemCategory::Open if row.position <= open => Some(ReasonCode::SelectedOpenTopTwoThirds),
                SystemCategory::Open => {
                    excluded.push(ReasonCode::ExcludedOpenBelowTwoThirds);
                    None
                }
                SystemCategory::Closed if row.position <= closed => Some(ReasonCode::SelectedClosedTopThird),
                SystemCategory::Closed => {
                    excluded.push(ReasonCode::ExcludedClosedBelowThird);
                    None
                }
            };
            if !above_cutoff {
                excluded.push(ReasonCode::ExcludedBelowCutoff);
            }
            if row.withdrawn {
                excluded.push(ReasonCode::ExcludedWithdrawn);
            }
            let (selected, reasons) = match admitted {
                Some(code) if excluded.is_empty() => (true, vec![code]),
                _ => (false, excluded),
            };
            Decision {
                system: row.system.name.clone(),
                position: row.position,
                above_cutoff,
                selected,
                reasons,
            }
        })
        .collect();
    SelectionOutcome {
        cutoff_position: cutoff,
        closed_limit: closed,
        open_limit: open,
        decisions,
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::model::SystemEntry;

    fn row(name: &str, category: SystemCategory, position: usize, autorank: f64) -> RankedRow {
        RankedRow {
            system: SystemEntry::new(name, category),
            withdrawn: false,
            unsupported: false,
            raw_scores: BTreeMap::new(),
            normalized: BTreeMap::new(),
            autorank_exact: autorank,
            autorank_display: autorank,
            position,
            above_cutoff: true,
            selected: false,
            reasons: Vec::new(),
        }
    }

    /// A field of `n` rows at `1.0, 1.1, ...` with the given overrides.
    fn field(n: usize, overrides: &[(usize, &str, SystemCategory, f64)]) -> Vec<RankedRow> {
        let mut rows: Vec<RankedRow> = (1..=n)
            .map(|p| {
                row(
                    &format!("sys-{p:02}"),
                    SystemCategory::Closed,
                    p,
                    1.0 + 0.1 * (p - 1) as f64,
                )
            })
            .collect();
        for &(p, name, category, autorank) in overrides {
            rows[p - 1] = row(name, category, p, autorank);
        }
        rows
    }

    fn decision<'a>(outcome: &'a SelectionOutcome, name: &str) -> &'a Decision {
        outcome.decisions.iter().find(|d| d.system == name).unwrap()
    }

    #[test]
    fn cutoff_after_first_large_gap() {
        use SystemCategory::*;
        // Czech-Ukrainian tail: ..., IKUN-C 3.0 | Phi-3-Medium 9.1, BJFU-LPT 11.5, CycleL 21.0
        let rows = vec![
            row("CUNI-Transformer", Constrained, 1, 2.98),
            row("IKUN-C", Constrained, 2, 3.02),
            row("Phi-3-Medium", Closed, 3, 9.1),
            row("BJFU-LPT", Closed, 4, 11.5),
            row("CycleL", Constrained, 5, 21.0),
        ];
        assert_eq!(find_cutoff(&rows, &RankingConfig::default()), Some(3));
    }

    #[test]
    fn cutoff_gap_must_strictly_exceed() {
        use SystemCategory::*;
        // English-Hindi: IKUN-C 5.5, NVIDIA-NeMo 5.8 (gap 0.3), Phi-3-Medium 7.4 (gap 1.6).
        let rows = vec![
            row("IKUN-C", Constrained, 1, 5.5),
            row("NVIDIA-NeMo", Closed, 2, 5.8),
            row("Phi-3-Medium", Closed, 3, 7.4),
        ];
        assert_eq!(find_cutoff(&rows, &RankingConfig::default()), Some(3));

        let exact = vec![row("a", Open, 1, 1.0), row("b", Open, 2, 2.5)];
        assert_eq!(find_cutoff(&exact, &RankingConfig::default()), None);
    }

    #[test]
    fn no_cutoff_for_flat_or_tiny_fields() {
        let flat: Vec<RankedRow> = (1..=5)
            .map(|p| row(&format!("s{p}"), SystemCategory::Open, p, 1.0))
            .collect();
        assert_eq!(find_cutoff(&flat, &RankingConfig::default()), None);
        assert_eq!(find_cutoff(&flat[..1], &RankingConfig::default()), None);
        assert_eq!(find_cutoff(&[], &RankingConfig::default()), None);
    }

    #[test]
    fn limits_use_ceiling_and_floor() {
        let config = RankingConfig::default();
        assert_eq!(closed_limit(26, &config), 9);
        assert_eq!(open_limit(26, &config), 17);
        assert_eq!(closed_limit(23, &config), 8);
        assert_eq!(open_limit(23, &config), 15);
        assert_eq!(closed_limit(20, &config), 7);
        assert_eq!(open_limit(20, &config), 13);
        assert_eq!(open_limit(24, &config), 16);
        assert_eq!(closed_limit(0, &config), 0);
        assert_eq!(open_limit(1, &config), 0);
    }

    #[test]
    fn closed_third_boundary_english_german() {
        use SystemCategory::*;
        let rows = field(26, &[(9, "Gemini-1.5-Pro", Closed, 1.8), (10, "ONLINE-W", Closed, 1.9)]);
        let outcome = select_for_human_eval(&rows, None, &RankingConfig::default());
        assert_eq!(outcome.closed_limit, 9);
        let gemini = decision(&outcome, "Gemini-1.5-Pro");
        assert!(gemini.selected);
        assert_eq!(gemini.reasons, [ReasonCode::SelectedClosedTopThird]);
        let online_w = decision(&outcome, "ONLINE-W");
        assert!(!online_w.selected);
        assert_eq!(online_w.reasons, [ReasonCode::ExcludedClosedBelowThird]);
    }

    #[test]
    fn open_two_thirds_boundary_english_spanish() {
        use SystemCategory::*;
        let rows = field(23, &[(13, "IKUN", Open, 2.2), (16, "Aya23", Open, 2.5)]);
        let outcome = select_for_human_eval(&rows, None, &RankingConfig::default());
        assert_eq!(outcome.open_limit, 15);
        assert_eq!(
            decision(&outcome, "IKUN").reasons,
            [ReasonCode::SelectedOpenTopTwoThirds]
        );
        let aya = decision(&outcome, "Aya23");
        assert!(!aya.selected);
        assert_eq!(aya.reasons, [ReasonCode::ExcludedOpenBelowTwoThirds]);
    }

    #[test]
    fn constrained_selected_above_cutoff_only() {
        use SystemCategory::*;
        let rows = field(
            23,
            &[
                (21, "MSLC", Constrained, 4.0),
                (22, "TSU-HITs", Constrained, 16.3),
                (23, "CycleL", Constrained, 24.0),
            ],
        );
        let cutoff = find_cutoff(&rows, &RankingConfig::default());
        assert_eq!(cutoff, Some(22));
        let outcome = select_for_human_eval(&rows, cutoff, &RankingConfig::default());
        assert_eq!(decision(&outcome, "MSLC").reasons, [ReasonCode::SelectedConstrained]);
        let tsu = decision(&outcome, "TSU-HITs");
        assert!(!tsu.above_cutoff && !tsu.selected);
        assert_eq!(tsu.reasons, [ReasonCode::ExcludedBelowCutoff]);
    }

    #[test]
    fn withdrawn_is_never_selected() {
        let mut rows = field(26, &[(1, "CUNI-Transformer", SystemCategory::Constrained, 1.0)]);
        rows[0].withdrawn = true;
        let outcome = select_for_human_eval(&rows, None, &RankingConfig::default());
        let d = decision(&outcome, "CUNI-Transformer");
        assert!(!d.selected);
        assert_eq!(d.reasons, [ReasonCode::ExcludedWithdrawn]);
    }

    #[test]
    fn excluded_rows_collect_every_failed_rule() {
        let mut rows = field(6, &[(6, "late", SystemCategory::Closed, 10.0)]);
        rows[5].withdrawn = true;
        let outcome = select_for_human_eval(&rows, Some(6), &RankingConfig::default());
        assert_eq!(
            decision(&outcome, "late").reasons,
            [
                ReasonCode::ExcludedClosedBelowThird,
                ReasonCode::ExcludedBelowCutoff,
                ReasonCode::ExcludedWithdrawn
            ]
        );
    }

    #[test]
    fn apply_copies_state() {
        let mut rows = field(4, &[]);
        let outcome = select_for_human_eval(&rows, Some(3), &RankingConfig::default());
        outcome.apply(&mut rows);
        assert!(rows[0].selected);
        assert!(!rows[2].above_cutoff);
        assert_eq!(outcome.selected().count(), 2);
    }
}
