use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::detector::TopicProfile;
use crate::tabulator::FollowerTable;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttributionMode {
    /// Split `h` by `P(d|z)` renormalized over the foundational set.
    #[default]
    Proportional,
    /// Every foundational paper receives the full `h`.
    Full,
}

/// Hidden citations per foundational paper, summed over topics.
pub fn attribute_hidden_to_papers(
    profiles: &[TopicProfile],
    tables: &[FollowerTable],
    mode: AttributionMode,
) -> Result<BTreeMap<String, f64>> {
    let by_topic: HashMap<usize, &FollowerTable> =
        tables.iter().map(|t| (t.topic_id, t)).collect();
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    for p in profiles {
        let table = by_topic.get(&p.topic_id).ok_or_else(|| {
            Error::Insufficient(format!("no follower table for topic {}", p.topic_id))
        })?;
        let h = table.totals().hidden() as f64;
        let norm: f64 = p.foundational_papers.iter().map(|f| f.p.estimate).sum();
        for f in &p.foundational_papers {
            let share = match mode {
                AttributionMode::Proportional => h * f.p.estimate / norm,
                AttributionMode::Full => h,
            };
            *out.entry(f.paper_id.clone()).or_default() += share;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDelta {
    pub paper_id: String,
    pub rank_explicit: usize,
    pub rank_with_hidden: usize,
    pub c_explicit: f64,
    pub h_attributed: f64,
}

impl RankDelta {
    /// Positive when the paper moves up.
    pub fn change(&self) -> i64 {
        self.rank_explicit as i64 - self.rank_with_hidden as i64
    }
}

/// Ranks by explicit citations, then by explicit plus hidden; ties by id.
/// Missing counts are zero. Output is ordered by the explicit rank.
pub fn rank_deltas(
    papers: &[String],
    c_explicit: &BTreeMap<String, f64>,
    h_attributed: &BTreeMap<String, f64>,
) -> Vec<RankDelta> {
    let mut ids: Vec<&String> = papers.iter().collect();
    ids.sort();
    ids.dedup();
    let c = |id: &str| c_explicit.get(id).copied().unwrap_or(0.0);
    let h = |id: &str| h_attributed.get(id).copied().unwrap_or(0.0);

    let mut by_c = ids.clone();
    by_c.sort_by(|a, b| c(b).total_cmp(&c(a)).then(a.cmp(b)));
    let mut by_total = ids.clone();
    by_total.sort_by(|a, b| (c(b) + h(b)).total_cmp(&(c(a) + h(a))).then(a.cmp(b)));
    let new_rank: HashMap<&str, usize> = by_total
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i + 1))
        .collect();

    by_c.iter()
        .enumerate()
        .map(|(i, id)| RankDelta {
            paper_id: id.to_string(),
            rank_explicit: i + 1,
            rank_with_hidden: new_rank[id.as_str()],
            c_explicit: c(id),
            h_attributed: h(id),
        })
        .collect()
}
