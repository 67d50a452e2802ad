//! Hidden-citation detection.
//!
//! The pipeline trains a topic model over `(n-gram, cited paper)` occurrences
//! taken from citation contexts, picks out catchphrases and foundational
//! papers per topic, and then counts the papers that mention a topic's
//! catchphrase without citing any of its foundational papers.
//!
//! Stages, in order:
//!
//! * [`corpus`]: ingestion, tokenizing/stemming, n-gram extraction, mention index
//! * [`topicmodel`]: collapsed Gibbs sampling and pooled probability estimates
//! * [`detector`]: catchphrase / foundational-paper thresholds and entropies
//! * [`tabulator`]: follower classification and p(cite | mention) statistics
//! * [`citegraph`]: citation paths from hidden citations to foundational papers
//! * [`metrics`]: correlations, regressions, credit attribution, rank changes
//! * [`synthgen`]: synthetic corpora with planted ground truth
//! * [`pipeline`]: stage files and report tables used by the `oblit` binary

pub mod artifact;
pub mod citegraph;
pub mod corpus;
pub mod detector;
mod error;
pub mod keyvalue;
pub mod metrics;
pub mod pipeline;
pub mod stats;
pub mod synthgen;
pub mod tabulator;
pub mod topicmodel;

pub use error::{Error, Result};
