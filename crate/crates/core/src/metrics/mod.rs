//! Cross-topic and per-paper statistics.

mod catchphrase;
mod correlation;
mod credit;
mod regression;

pub use catchphrase::{
    author_count_stats, catchphrase_origin, classify_catchphrases, AuthorStats, CatchphraseClass,
    ClassOverrides, OriginStats,
};
pub use correlation::{average_ranks, spearman, PermutationConfig, Spearman};
pub use credit::{attribute_hidden_to_papers, rank_deltas, AttributionMode, RankDelta};
pub use regression::{loglinear_fit, loglog_fit, ols, BandPoint, RegressionFit};
