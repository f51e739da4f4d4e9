#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use autorank::ingest::{parse_registry, parse_scores};
use autorank::{rank_all, LeaderboardTable, MetricSpec, RankingConfig, Registry, Report, ScoreRecord};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn wmt24() -> PathBuf {
    fixtures().join("wmt24")
}

pub fn read(path: impl Into<PathBuf>) -> String {
    let path = path.into();
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn load_wmt24() -> (Registry, Vec<ScoreRecord>) {
    let registry = parse_registry(&read(wmt24().join("systems.tsv"))).unwrap();
    let records = parse_scores(
        &read(wmt24().join("scores.tsv")),
        &registry,
        &MetricSpec::autorank_pair(),
    )
    .unwrap();
    (registry, records)
}

pub fn rank_wmt24() -> Vec<LeaderboardTable> {
    let (registry, records) = load_wmt24();
    rank_all(
        &records,
        &registry,
        &MetricSpec::autorank_pair(),
        &RankingConfig::default(),
        None,
    )
    .unwrap()
}

/// Golden reports in file-name order, with their paths.
pub fn goldens() -> Vec<(PathBuf, Report)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(wmt24().join("golden"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let report = Report::parse(&read(&p)).unwrap();
            (p, report)
        })
        .collect()
}

pub mod random {
    use std::collections::BTreeMap;

    use autorank::autorank::ScoredSystem;
    use autorank::{LanguagePair, MetricSpec, Orientation, Score, SystemCategory, SystemEntry};
    use proptest::prelude::*;

    /// A ranking instance: metrics with random orientation and a score for
    /// every (system, metric).
    #[derive(Debug, Clone)]
    pub struct Instance {
        pub metrics: Vec<MetricSpec>,
        /// `scores[i][m]` is system `i`'s raw value for metric `m`.
        pub scores: Vec<Vec<f64>>,
        pub categories: Vec<SystemCategory>,
    }

    impl Instance {
        pub fn pair() -> LanguagePair {
            "en-de".parse().unwrap()
        }

        pub fn name(i: usize) -> String {
            format!("sys-{i:02}")
        }

        pub fn n(&self) -> usize {
            self.scores.len()
        }

        pub fn systems(&self) -> Vec<ScoredSystem> {
            self.scores
                .iter()
                .enumerate()
                .map(|(i, row)| ScoredSystem {
                    system: SystemEntry::new(Self::name(i), self.categories[i]),
                    scores: self
                        .metrics
                        .iter()
                        .zip(row)
                        .map(|(m, &v)| (m.id.clone(), Score::from_value(v).unwrap()))
                        .collect::<BTreeMap<_, _>>(),
                })
                .collect()
        }

        /// Same instance with metric `m` mapped through `x -> scale * x + shift`.
        /// A negative scale flips the orientation so that "better" is preserved.
        pub fn transformed(&self, m: usize, scale: f64, shift: f64) -> Self {
            let mut out = self.clone();
            for row in &mut out.scores {
                row[m] = scale * row[m] + shift;
            }
            if scale < 0.0 {
                let spec = &mut out.metrics[m];
                spec.orientation = match spec.orientation {
                    Orientation::LowerBetter => Orientation::HigherBetter,
                    Orientation::HigherBetter => Orientation::LowerBetter,
                };
            }
            out
        }
    }

    fn orientation() -> impl Strategy<Value = Orientation> {
        prop_oneof![Just(Orientation::LowerBetter), Just(Orientation::HigherBetter)]
    }

    fn category() -> impl Strategy<Value = SystemCategory> {
        prop_oneof![
            Just(SystemCategory::Constrained),
            Just(SystemCategory::Open),
            Just(SystemCategory::Closed)
        ]
    }

    /// Scores on a 0.01 grid, or drawn from a handful of values to force ties.
    fn score() -> impl Strategy<Value = f64> {
        prop_oneof![
            3 => (-10_000i32..=10_000).prop_map(|v| f64::from(v) / 100.0),
            1 => (0i32..4).prop_map(f64::from),
        ]
    }

    pub fn instance(max_systems: usize) -> impl Strategy<Value = Instance> {
        (1..=3usize, 1..=max_systems)
            .prop_flat_map(|(n_metrics, n_systems)| {
                (
                    proptest::collection::vec(orientation(), n_metrics),
                    proptest::collection::vec(proptest::collection::vec(score(), n_metrics), n_systems),
                    proptest::collection::vec(category(), n_systems),
                )
            })
            .prop_map(|(orientations, scores, categories)| Instance {
                metrics: orientations
                    .into_iter()
                    .enumerate()
                    .map(|(i, o)| MetricSpec::new(format!("m{i}"), format!("M{i}"), o))
                    .collect(),
                scores,
                categories,
            })
    }

    /// Direct evaluation of the rank-scale formula for one score.
    pub fn oracle_rank(values: &[f64], value: f64, orientation: Orientation, span: f64) -> f64 {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi == lo {
            return 1.0;
        }
        let distance = match orientation {
            Orientation::LowerBetter => value - lo,
            Orientation::HigherBetter => hi - value,
        };
        1.0 + span * distance / (hi - lo)
    }
}
