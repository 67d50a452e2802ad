//! Follower classification: cite and mention, cite only, mention only.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, MentionIndex};
use crate::detector::TopicProfile;
use crate::stats::{self, Estimate};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FollowerRecord {
    pub paper_id: String,
    pub topic_id: usize,
    /// References include at least one foundational paper.
    pub cites: bool,
    /// Full text contains at least one catchphrase.
    pub mentions: bool,
    pub year: i32,
}

impl FollowerRecord {
    pub fn is_hidden(&self) -> bool {
        self.mentions && !self.cites
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearCounts {
    pub n_both: usize,
    pub n_cite_only: usize,
    pub n_mention_only: usize,
}

impl YearCounts {
    fn add(&mut self, other: &YearCounts) {
        self.n_both += other.n_both;
        self.n_cite_only += other.n_cite_only;
        self.n_mention_only += other.n_mention_only;
    }

    /// Explicit citations `c`.
    pub fn citations(&self) -> usize {
        self.n_both + self.n_cite_only
    }

    /// Hidden citations `h`.
    pub fn hidden(&self) -> usize {
        self.n_mention_only
    }

    /// Mentions `m`.
    pub fn mentions(&self) -> usize {
        self.n_both + self.n_mention_only
    }

    pub fn followers(&self) -> usize {
        self.n_both + self.n_cite_only + self.n_mention_only
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FollowerTable {
    pub topic_id: usize,
    pub first_foundational_year: i32,
    pub years: BTreeMap<i32, YearCounts>,
    /// Sorted by paper id.
    pub followers: Vec<FollowerRecord>,
}

impl FollowerTable {
    fn from_records(topic_id: usize, first_year: i32, followers: Vec<FollowerRecord>) -> Self {
        let mut years: BTreeMap<i32, YearCounts> = BTreeMap::new();
        for f in &followers {
            let e = years.entry(f.year).or_default();
            match (f.cites, f.mentions) {
                (true, true) => e.n_both += 1,
                (true, false) => e.n_cite_only += 1,
                (false, true) => e.n_mention_only += 1,
                (false, false) => unreachable!("non-followers are not stored"),
            }
        }
        FollowerTable {
            topic_id,
            first_foundational_year: first_year,
            years,
            followers,
        }
    }

    pub fn totals(&self) -> YearCounts {
        self.counts_in(None)
    }

    pub fn counts_in(&self, range: Option<&RangeInclusive<i32>>) -> YearCounts {
        let mut t = YearCounts::default();
        for (y, c) in &self.years {
            if range.is_none_or(|r| r.contains(y)) {
                t.add(c);
            }
        }
        t
    }

    pub fn counts_at_lag(&self, lag: i32) -> YearCounts {
        self.years
            .get(&(self.first_foundational_year + lag))
            .copied()
            .unwrap_or_default()
    }

    pub fn hidden_followers(&self) -> impl Iterator<Item = &FollowerRecord> {
        self.followers.iter().filter(|f| f.is_hidden())
    }
}

/// Classifies every non-foundational paper against every topic.
pub fn tabulate(
    profiles: &[TopicProfile],
    corpus: &Corpus,
    index: &MentionIndex,
) -> Result<Vec<FollowerTable>> {
    let mut citers: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, p) in corpus.papers().iter().enumerate() {
        for r in &p.references {
            citers.entry(r.as_str()).or_default().push(i);
        }
    }
    profiles
        .par_iter()
        .map(|profile| {
            let mentioning = index.mentioning_any(profile.catchphrase_ngrams())?;
            let mut citing: BTreeSet<&str> = BTreeSet::new();
            for f in &profile.foundational_papers {
                if let Some(list) = citers.get(f.paper_id.as_str()) {
                    citing.extend(list.iter().map(|&i| corpus.papers()[i].paper_id.as_str()));
                }
            }
            let candidates: BTreeSet<&str> = mentioning.union(&citing).copied().collect();
            let mut records = Vec::new();
            for id in candidates {
                if profile.is_foundational(id) {
                    continue;
                }
                let paper = corpus.require(id)?;
                records.push(FollowerRecord {
                    paper_id: id.to_string(),
                    topic_id: profile.topic_id,
                    cites: citing.contains(id),
                    mentions: mentioning.contains(id),
                    year: paper.year,
                });
            }
            Ok(FollowerTable::from_records(
                profile.topic_id,
                profile.first_foundational_year,
                records,
            ))
        })
        .collect()
}

/// `h / (h + c)` over years `>= since_year`.
pub fn hidden_fraction(table: &FollowerTable, since_year: i32) -> Result<f64> {
    let t = table.counts_in(Some(&(since_year..=i32::MAX)));
    let denom = t.hidden() + t.citations();
    if denom == 0 {
        return Err(Error::Insufficient(format!(
            "topic {} has no followers since {since_year}",
            table.topic_id
        )));
    }
    Ok(t.hidden() as f64 / denom as f64)
}

/// `n_both / m` with its binomial 95% half-width.
pub fn p_cite_given_mention(
    table: &FollowerTable,
    years: Option<RangeInclusive<i32>>,
) -> Result<Estimate> {
    let t = table.counts_in(years.as_ref());
    if t.mentions() == 0 {
        return Err(Error::Insufficient(format!(
            "topic {} has no mentions in range",
            table.topic_id
        )));
    }
    Ok(stats::proportion(t.n_both as f64, t.mentions() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Aggregation {
    /// Unweighted mean of per-topic probabilities.
    #[default]
    TopicMean,
    /// Pooled counts across topics.
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagPoint {
    pub lag: i32,
    /// Number of topics with mentions at this lag.
    pub topics: usize,
    pub mean: Option<f64>,
    /// `None` when fewer than two topics contribute (topic-mean mode).
    pub halfwidth: Option<f64>,
}

/// Cross-topic p(cite | mention) at lags `0..=horizon_years` after each
/// topic's first foundational paper.
pub fn temporal_decay(
    tables: &[FollowerTable],
    horizon_years: i32,
    aggregation: Aggregation,
) -> Result<Vec<LagPoint>> {
    if !tables.iter().any(|t| t.counts_at_lag(0).mentions() > 0) {
        return Err(Error::Insufficient("no topic has mentions at lag 0".into()));
    }
    let series = (0..=horizon_years)
        .map(|lag| {
            let at: Vec<YearCounts> = tables
                .iter()
                .map(|t| t.counts_at_lag(lag))
                .filter(|c| c.mentions() > 0)
                .collect();
            if at.is_empty() {
                return LagPoint {
                    lag,
                    topics: 0,
                    mean: None,
                    halfwidth: None,
                };
            }
            let (mean, halfwidth) = match aggregation {
                Aggregation::TopicMean => {
                    let ps: Vec<f64> = at
                        .iter()
                        .map(|c| c.n_both as f64 / c.mentions() as f64)
                        .collect();
                    let (m, h) = stats::mean_with_halfwidth(&ps);
                    (m, h)
                }
                Aggregation::Pooled => {
                    let both: usize = at.iter().map(|c| c.n_both).sum();
                    let m: usize = at.iter().map(|c| c.mentions()).sum();
                    let e = stats::proportion(both as f64, m as f64);
                    (e.estimate, Some(e.halfwidth))
                }
            };
            LagPoint {
                lag,
                topics: at.len(),
                mean: Some(mean),
                halfwidth,
            }
        })
        .collect();
    Ok(series)
}

pub fn write_followers_csv<W: Write>(mut w: W, tables: &[FollowerTable]) -> std::io::Result<()> {
    writeln!(w, "topic_id,year,n_both,n_cite_only,n_mention_only")?;
    for t in tables {
        for (y, c) in &t.years {
            writeln!(
                w,
                "{},{},{},{},{}",
                t.topic_id, y, c.n_both, c.n_cite_only, c.n_mention_only
            )?;
        }
    }
    Ok(())
}

pub fn write_decay_csv<W: Write>(mut w: W, series: &[LagPoint]) -> std::io::Result<()> {
    writeln!(w, "lag,topics,mean,halfwidth")?;
    for p in series {
        writeln!(
            w,
            "{},{},{},{}",
            p.lag,
            p.topics,
            opt(p.mean),
            opt(p.halfwidth)
        )?;
    }
    Ok(())
}

pub(crate) fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}
