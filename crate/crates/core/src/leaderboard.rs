//! Per-pair pipeline: participants → AutoRank → ordering → cutoff → selection.

use std::collections::BTreeMap;

use crate::autorank::{compute_autorank, order_rows, ScoredSystem};
use crate::error::RankError;
use crate::ingest::{check_completeness, pairs_in};
use crate::model::{LanguagePair, LeaderboardTable, MetricSpec, RankingConfig, Registry, ScoreRecord};
use crate::selection::{find_cutoff, select_for_human_eval};

/// Rank one language pair.
///
/// Participants are the registered systems with at least one score for the
/// pair. A pair without participants yields an empty table.
pub fn rank_pair(
    pair: LanguagePair,
    records: &[ScoreRecord],
    registry: &Registry,
    metrics: &[MetricSpec],
    config: &RankingConfig,
) -> Result<LeaderboardTable, RankError> {
    config.validate()?;
    if metrics.is_empty() {
        return Err(RankError::NoMetrics);
    }
    let completeness = check_completeness(records, registry, metrics, pair);
    if !completeness.is_rankable() {
        return Err(RankError::IncompleteScores {
            pair: pair.to_string(),
            missing: completeness.missing,
        });
    }
    if completeness.participants.is_empty() {
        return Ok(LeaderboardTable {
            pair,
            metrics: metrics.to_vec(),
            config: config.clone(),
            rows: Vec::new(),
            cutoff_position: None,
        });
    }

    let mut scores: BTreeMap<&str, BTreeMap<String, _>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.pair == pair) {
        scores
            .entry(r.system.as_str())
            .or_default()
            .insert(r.metric.clone(), r.score.clone());
    }
    let systems = completeness
        .participants
        .iter()
        .map(|name| ScoredSystem {
            system: registry.get(name).expect("participant is registered").clone(),
            scores: scores.remove(name.as_str()).unwrap_or_default(),
        })
        .collect();

    let rows = compute_autorank(pair, systems, metrics, config)?;
    let mut rows = order_rows(rows, metrics);
    let cutoff = find_cutoff(&rows, config);
    select_for_human_eval(&rows, cutoff, config).apply(&mut rows);
    Ok(LeaderboardTable {
        pair,
        metrics: metrics.to_vec(),
        config: config.clone(),
        rows,
        cutoff_position: cutoff,
    })
}

/// Rank the requested pairs, or every pair present in `records`.
pub fn rank_all(
    records: &[ScoreRecord],
    registry: &Registry,
    metrics: &[MetricSpec],
    config: &RankingConfig,
    pairs: Option<&[LanguagePair]>,
) -> Result<Vec<LeaderboardTable>, RankError> {
    let available = pairs_in(records);
    let wanted: Vec<LanguagePair> = match pairs {
        Some(pairs) => {
            if let Some(missing) = pairs.iter().find(|p| !available.contains(p)) {
                return Err(RankError::UnknownPair(missing.to_string()));
            }
            pairs.to_vec()
        }
        None => available.into_iter().collect(),
    };
    wanted
        .into_iter()
        .map(|pair| rank_pair(pair, records, registry, metrics, config))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_registry, parse_scores};
    use crate::model::ReasonCode;

    const REGISTRY: &str = "system\tcategory\twithdrawn\tunsupported_pairs\n\
        Best\tclosed\t0\t\n\
        Mid\topen\t0\ten-de\n\
        Pulled\tconstrained\ten-de\t\n\
        Worst\tconstrained\t0\t\n\
        Absent\tclosed\t0\t\n";

    const SCORES: &str = "pair\tsystem\tmetric\tscore\n\
        en-de\tBest\tmetricx-23-xl\t1.0\n\
        en-de\tBest\tcometkiwi-da-xl\t0.80\n\
        en-de\tMid\tmetricx-23-xl\t2.0\n\
        en-de\tMid\tcometkiwi-da-xl\t0.75\n\
        en-de\tPulled\tmetricx-23-xl\t2.5\n\
        en-de\tPulled\tcometkiwi-da-xl\t0.70\n\
        en-de\tWorst\tmetricx-23-xl\t9.0\n\
        en-de\tWorst\tcometkiwi-da-xl\t0.10\n\
        cs-uk\tBest\tmetricx-23-xl\t1.0\n\
        cs-uk\tBest\tcometkiwi-da-xl\t0.80\n";

    fn inputs() -> (Registry, Vec<ScoreRecord>) {
        let registry = parse_registry(REGISTRY).unwrap();
        let records = parse_scores(SCORES, &registry, &MetricSpec::autorank_pair()).unwrap();
        (registry, records)
    }

    #[test]
    fn ranks_participants_only() {
        let (registry, records) = inputs();
        let table = rank_pair(
            "en-de".parse().unwrap(),
            &records,
            &registry,
            &MetricSpec::autorank_pair(),
            &RankingConfig::default(),
        )
        .unwrap();
        let names: Vec<&str> = table.rows.iter().map(|r| r.name()).collect();
        assert_eq!(names, ["Best", "Mid", "Pulled", "Worst"]);
        assert_eq!(table.rows[0].autorank_exact, 1.0);
        assert_eq!(table.rows[3].autorank_exact, 5.0);
        assert_eq!(table.cutoff_position, Some(4));
        assert!(table.rows[1].unsupported);

        let pulled = table.row("Pulled").unwrap();
        assert!(pulled.withdrawn);
        assert_eq!(pulled.reasons, [ReasonCode::ExcludedWithdrawn]);
        // closed limit ceil(4/3) = 2, open limit floor(8/3) = 2
        assert!(table.rows[0].selected && table.rows[1].selected);
        assert!(!table.row("Worst").unwrap().above_cutoff);
    }

    #[test]
    fn rank_all_covers_every_pair_in_code_order() {
        let (registry, records) = inputs();
        let tables = rank_all(
            &records,
            &registry,
            &MetricSpec::autorank_pair(),
            &RankingConfig::default(),
            None,
        )
        .unwrap();
        let pairs: Vec<String> = tables.iter().map(|t| t.pair.to_string()).collect();
        assert_eq!(pairs, ["cs-uk", "en-de"]);
        assert_eq!(tables[0].rows.len(), 1);
        assert_eq!(tables[0].rows[0].autorank_exact, 1.0);
    }

    #[test]
    fn unknown_pair_and_incomplete_scores() {
        let (registry, mut records) = inputs();
        let metrics = MetricSpec::autorank_pair();
        let config = RankingConfig::default();
        let en_cs: LanguagePair = "en-cs".parse().unwrap();
        assert_eq!(
            rank_all(&records, &registry, &metrics, &config, Some(&[en_cs])),
            Err(RankError::UnknownPair("en-cs".into()))
        );
        let empty = rank_pair(en_cs, &records, &registry, &metrics, &config).unwrap();
        assert!(empty.rows.is_empty());

        records.retain(|r| !(r.system == "Mid" && r.metric == "cometkiwi-da-xl"));
        assert!(matches!(
            rank_pair("en-de".parse().unwrap(), &records, &registry, &metrics, &config),
            Err(RankError::IncompleteScores { .. })
        ));
    }
}
