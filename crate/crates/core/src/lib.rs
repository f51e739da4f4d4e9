//! AutoRank leaderboards for machine translation shared tasks.
//!
//! Each language pair is ranked independently. Every metric score is mapped
//! onto a common `[1, 1 + N]` scale (1 = best system, `1 + N` = worst), the
//! per-metric values are averaged into an AutoRank, and the systems are
//! ordered by it. A score-gap cutoff and category quotas then decide which
//! systems go to human evaluation.
//!
//! ```
//! use autorank::ingest::{parse_registry, parse_scores};
//! use autorank::{rank_pair, MetricSpec, RankingConfig};
//!
//! let registry = parse_registry(
//!     "system\tcategory\twithdrawn\tunsupported_pairs\n\
//!      Alpha\tconstrained\t0\t\n\
//!      Beta\topen\t0\t\n",
//! )?;
//! let metrics = MetricSpec::autorank_pair();
//! let records = parse_scores(
//!     "pair\tsystem\tmetric\tscore\n\
//!      en-de\tAlpha\tmetricx-23-xl\t1.5\n\
//!      en-de\tAlpha\tcometkiwi-da-xl\t0.71\n\
//!      en-de\tBeta\tmetricx-23-xl\t2.5\n\
//!      en-de\tBeta\tcometkiwi-da-xl\t0.65\n",
//!     &registry,
//!     &metrics,
//! )?;
//! let table = rank_pair("en-de".parse()?, &records, &registry, &metrics, &RankingConfig::default())?;
//! assert_eq!(table.rows[0].name(), "Alpha");
//! assert_eq!(table.rows[1].autorank_exact, 3.0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod autorank;
pub mod cli;
pub mod error;
pub mod golden;
pub mod ingest;
pub mod leaderboard;
pub mod model;
pub mod render;
pub mod report;
pub mod selection;

pub use error::{ConfigError, ModelError, ParseError, ParseErrorKind, RankError};
pub use leaderboard::{rank_all, rank_pair};
pub use model::{
    LanguagePair, LeaderboardTable, MetricSpec, Orientation, RankedRow, RankingConfig, ReasonCode, Registry, ScaleSpan,
    Score, ScoreRecord, SystemCategory, SystemEntry, Withdrawal,
};
pub use render::{render_table, Format, RenderOptions};
pub use report::Report;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/data-formats.md")]
    mod data_formats {}
    #[doc = include_str!("../../../book/src/normalization.md")]
    mod normalization {}
    #[doc = include_str!("../../../book/src/selection.md")]
    mod selection {}
    #[doc = include_str!("../../../book/src/rendering.md")]
    mod rendering {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/reproduction.md")]
    mod reproduction {}
}
