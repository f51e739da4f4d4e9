//! Min-max normalization of metric scores onto a rank scale, and the AutoRank
//! average over metrics.
//!
//! For each metric the best system in a pair maps to 1 and the worst to
//! `1 + span`, with everything in between placed linearly. Orientation is
//! applied first, so "advantage" always grows as a system gets worse:
//!
//! ```text
//! adv        = score - best      (lower is better)
//!            = best - score      (higher is better)
//! normalized = 1 + span * adv / adv(worst)
//! ```
//!
//! AutoRank is the arithmetic mean of the normalized values over all metrics.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::RankError;
use crate::model::{LanguagePair, MetricSpec, Orientation, RankedRow, RankingConfig, Score, SystemEntry};

/// Observed extremes of one metric within a pair, in raw metric units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBounds {
    pub best: f64,
    pub worst: f64,
}

impl MetricBounds {
    fn range(&self) -> (f64, f64) {
        (self.best.min(self.worst), self.best.max(self.worst))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationContext {
    pub pair: LanguagePair,
    /// Participants in the pair, withdrawn systems included.
    pub n_systems: usize,
    pub bounds: BTreeMap<String, MetricBounds>,
}

impl NormalizationContext {
    /// Build the context from every participant's scores.
    pub fn from_systems(
        pair: LanguagePair,
        metrics: &[MetricSpec],
        systems: &[ScoredSystem],
    ) -> Result<Self, RankError> {
        if systems.is_empty() {
            return Err(RankError::NoSystems);
        }
        let mut bounds = BTreeMap::new();
        for metric in metrics {
            let mut values = systems.iter().map(|s| {
                s.scores
                    .get(&metric.id)
                    .map(Score::value)
                    .ok_or_else(|| incomplete(pair, systems, metrics))
            });
            let first = values.next().expect("at least one system")?;
            let (mut lo, mut hi) = (first, first);
            for v in values {
                let v = v?;
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let (best, worst) = match metric.orientation {
                Orientation::LowerBetter => (lo, hi),
                Orientation::HigherBetter => (hi, lo),
            };
            bounds.insert(metric.id.clone(), MetricBounds { best, worst });
        }
        Ok(Self {
            pair,
            n_systems: systems.len(),
            bounds,
        })
    }
}

fn incomplete(pair: LanguagePair, systems: &[ScoredSystem], metrics: &[MetricSpec]) -> RankError {
    let missing = systems
        .iter()
        .filter_map(|s| {
            let lacking: Vec<String> = metrics
                .iter()
                .filter(|m| !s.scores.contains_key(&m.id))
                .map(|m| m.id.clone())
                .collect();
            (!lacking.is_empty()).then(|| (s.system.name.clone(), lacking))
        })
        .collect();
    RankError::IncompleteScores {
        pair: pair.to_string(),
        missing,
    }
}

/// Map one raw score onto the rank scale of its metric.
pub fn normalize_score(
    score: f64,
    metric: &MetricSpec,
    ctx: &NormalizationContext,
    config: &RankingConfig,
) -> Result<f64, RankError> {
    let bounds = ctx
        .bounds
        .get(&metric.id)
        .ok_or_else(|| RankError::UnknownMetric(metric.id.clone()))?;
    let (min, max) = bounds.range();
    if !(min..=max).contains(&score) {
        return Err(RankError::ScoreOutOfRange {
            metric: metric.id.clone(),
            score,
            min,
            max,
        });
    }
    let (adv, worst_adv) = match metric.orientation {
        Orientation::LowerBetter => (score - bounds.best, bounds.worst - bounds.best),
        Orientation::HigherBetter => (bounds.best - score, bounds.best - bounds.worst),
    };
    if worst_adv == 0.0 {
        return Ok(1.0);
    }
    // Divide before scaling so that the worst system lands on exactly 1 + span.
    Ok(1.0 + config.scale_span.width(ctx.n_systems) * (adv / worst_adv))
}

/// Round half away from zero to `decimals` places.
pub fn round_display(value: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (value * scale).round() / scale
}

/// A participant's raw scores before ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSystem {
    pub system: SystemEntry,
    pub scores: BTreeMap<String, Score>,
}

/// Normalize every metric and average into AutoRank.
///
/// Rows come back in input order with `position == 0`; see [`order_rows`].
pub fn compute_autorank(
    pair: LanguagePair,
    systems: Vec<ScoredSystem>,
    metrics: &[MetricSpec],
    config: &RankingConfig,
) -> Result<Vec<RankedRow>, RankError> {
    if metrics.is_empty() {
        return Err(RankError::NoMetrics);
    }
    let ctx = NormalizationContext::from_systems(pair, metrics, &systems)?;
    systems
        .into_iter()
        .map(|scored| {
            let mut normalized = BTreeMap::new();
            let mut total = 0.0;
            for metric in metrics {
                let raw = scored.scores[&metric.id].value();
                let rank = normalize_score(raw, metric, &ctx, config)?;
                total += rank;
                normalized.insert(metric.id.clone(), rank);
            }
            let exact = total / metrics.len() as f64;
            Ok(RankedRow {
                withdrawn: scored.system.is_withdrawn(pair),
                unsupported: !scored.system.claims_support(pair),
                system: scored.system,
                raw_scores: scored.scores,
                normalized,
                autorank_exact: exact,
                autorank_display: round_display(exact, config.display_decimals),
                position: 0,
                above_cutoff: true,
                selected: false,
                reasons: Vec::new(),
            })
        })
        .collect()
}

/// Sort by AutoRank and assign 1-based positions.
///
/// Ties on the exact value fall back to the first metric's normalized rank,
/// then to the system name.
pub fn order_rows(mut rows: Vec<RankedRow>, metrics: &[MetricSpec]) -> Vec<RankedRow> {
    rows.sort_by(|a, b| compare_rows(a, b, metrics));
    for (i, row) in rows.iter_mut().enumerate() {
        row.position = i + 1;
    }
    rows
}

/// The total order used by [`order_rows`].
pub fn compare_rows(a: &RankedRow, b: &RankedRow, metrics: &[MetricSpec]) -> Ordering {
    let first = metrics.first().map(|m| m.id.as_str());
    let first_rank = |row: &RankedRow| first.and_then(|id| row.normalized.get(id)).copied().unwrap_or(0.0);
    a.autorank_exact
        .total_cmp(&b.autorank_exact)
        .then_with(|| first_rank(a).total_cmp(&first_rank(b)))
        .then_with(|| a.system.name.cmp(&b.system.name))
}
