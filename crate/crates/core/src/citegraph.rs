//! Citation paths from hidden citations to a topic's foundational papers.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::detector::TopicProfile;
use crate::tabulator::FollowerTable;
use crate::{Error, Result};

pub const DEFAULT_MAX_DEPTH: usize = 4;

/// Directed graph, citing -> cited. References to papers outside the corpus
/// are dropped here (they stay on the paper records).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationGraph {
    ids: Vec<String>,
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
}

impl CitationGraph {
    pub fn build(corpus: &Corpus) -> Self {
        Self::from_edges(
            corpus.papers().iter().map(|p| p.paper_id.as_str()),
            corpus.papers().iter().flat_map(|p| {
                p.references
                    .iter()
                    .map(move |r| (p.paper_id.as_str(), r.as_str()))
            }),
        )
    }

    /// Graph over `nodes`; edges touching unknown nodes and self-loops are
    /// dropped, duplicates collapse.
    pub fn from_edges<'a, N, E>(nodes: N, edges: E) -> Self
    where
        N: IntoIterator<Item = &'a str>,
        E: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut ids: Vec<String> = nodes.into_iter().map(str::to_string).collect();
        ids.sort();
        ids.dedup();
        let mut out = vec![Vec::new(); ids.len()];
        let mut inn = vec![Vec::new(); ids.len()];
        let find = |id: &str| ids.binary_search_by(|x| x.as_str().cmp(id)).ok();
        for (a, b) in edges {
            if a == b {
                continue;
            }
            if let (Some(i), Some(j)) = (find(a), find(b)) {
                out[i].push(j as u32);
            }
        }
        for (i, row) in out.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            for &j in row.iter() {
                inn[j as usize].push(i as u32);
            }
        }
        CitationGraph { ids, out, inn }
    }

    pub fn index(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|x| x.as_str().cmp(id)).ok()
    }

    pub fn id(&self, ix: usize) -> &str {
        &self.ids[ix]
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn references(&self, ix: usize) -> &[u32] {
        &self.out[ix]
    }

    pub fn in_degree(&self, ix: usize) -> usize {
        self.inn[ix].len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }
}

/// Length of the shortest reference path from `source` to any of `targets`,
/// if one exists within `max_depth` hops. Unknown ids are unreachable.
pub fn shortest_citation_path(
    graph: &CitationGraph,
    source: &str,
    targets: &HashSet<&str>,
    max_depth: usize,
) -> Option<usize> {
    let src = graph.index(source)?;
    let goal: HashSet<usize> = targets.iter().filter_map(|t| graph.index(t)).collect();
    if goal.is_empty() {
        return None;
    }
    let mut seen = vec![false; graph.len()];
    seen[src] = true;
    let mut queue = VecDeque::from([(src, 0usize)]);
    while let Some((node, depth)) = queue.pop_front() {
        if depth == max_depth {
            continue;
        }
        for &next in graph.references(node) {
            let next = next as usize;
            if goal.contains(&next) {
                return Some(depth + 1);
            }
            if !seen[next] {
                seen[next] = true;
                queue.push_back((next, depth + 1));
            }
        }
    }
    None
}

fn foundational_set(profile: &TopicProfile) -> HashSet<&str> {
    profile
        .foundational_papers
        .iter()
        .map(|f| f.paper_id.as_str())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathHistogram {
    pub topic_id: usize,
    /// `by_length[i]` counts hidden citations at distance `i + 1`.
    pub by_length: Vec<usize>,
    /// Farther than the depth bound, or no path.
    pub unreached: usize,
}

impl PathHistogram {
    pub fn at(&self, length: usize) -> usize {
        length
            .checked_sub(1)
            .and_then(|i| self.by_length.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.by_length.iter().sum::<usize>() + self.unreached
    }
}

fn hidden_distances(
    graph: &CitationGraph,
    table: &FollowerTable,
    profile: &TopicProfile,
    max_depth: usize,
) -> Vec<(i32, Option<usize>)> {
    let targets = foundational_set(profile);
    let hidden: Vec<_> = table.hidden_followers().collect();
    hidden
        .par_iter()
        .map(|f| {
            (
                f.year,
                shortest_citation_path(graph, &f.paper_id, &targets, max_depth),
            )
        })
        .collect()
}

/// Buckets the topic's hidden citations by distance to the foundational set.
pub fn path_histogram(
    graph: &CitationGraph,
    table: &FollowerTable,
    profile: &TopicProfile,
    max_depth: usize,
) -> PathHistogram {
    let mut h = PathHistogram {
        topic_id: table.topic_id,
        by_length: vec![0; max_depth],
        unreached: 0,
    };
    for (_, d) in hidden_distances(graph, table, profile, max_depth) {
        match d {
            Some(len) => h.by_length[len - 1] += 1,
            None => h.unreached += 1,
        }
    }
    h
}

/// `(n_both + hidden citations at distance exactly 2) / mentions` at `lag`.
pub fn indirect_adjusted_p(
    table: &FollowerTable,
    graph: &CitationGraph,
    profile: &TopicProfile,
    lag: i32,
) -> Result<f64> {
    let year = table.first_foundational_year + lag;
    let counts = table.counts_at_lag(lag);
    if counts.mentions() == 0 {
        return Err(Error::Insufficient(format!(
            "topic {} has no mentions at lag {lag}",
            table.topic_id
        )));
    }
    let targets = foundational_set(profile);
    let indirect = table
        .hidden_followers()
        .filter(|f| f.year == year)
        .filter(|f| shortest_citation_path(graph, &f.paper_id, &targets, 2) == Some(2))
        .count();
    Ok((counts.n_both + indirect) as f64 / counts.mentions() as f64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    pub paper_id: String,
    /// Number of hidden citations referencing this paper.
    pub count: usize,
    pub path_length: Option<usize>,
}

/// The `k` papers most cited by the topic's hidden citations, excluding the
/// foundational papers; ties by paper id.
pub fn top_alternatives(
    graph: &CitationGraph,
    table: &FollowerTable,
    profile: &TopicProfile,
    k: usize,
    max_depth: usize,
) -> Vec<Alternative> {
    let targets = foundational_set(profile);
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for f in table.hidden_followers() {
        let Some(ix) = graph.index(&f.paper_id) else {
            continue;
        };
        for &r in graph.references(ix) {
            let id = graph.id(r as usize);
            if !targets.contains(id) {
                *counts.entry(id).or_default() += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .map(|(id, count)| Alternative {
            paper_id: id.to_string(),
            count,
            path_length: shortest_citation_path(graph, id, &targets, max_depth),
        })
        .collect()
}

pub fn write_histograms_csv<W: Write>(
    mut w: W,
    hists: &[PathHistogram],
    max_depth: usize,
) -> std::io::Result<()> {
    write!(w, "topic_id")?;
    for l in 1..=max_depth {
        write!(w, ",len{l}")?;
    }
    writeln!(w, ",unreached")?;
    for h in hists {
        write!(w, "{}", h.topic_id)?;
        for l in 1..=max_depth {
            write!(w, ",{}", h.at(l))?;
        }
        writeln!(w, ",{}", h.unreached)?;
    }
    Ok(())
}

pub fn write_alternatives_csv<W: Write>(
    mut w: W,
    rows: &[(usize, Vec<Alternative>)],
) -> std::io::Result<()> {
    writeln!(w, "topic_id,rank,paper_id,count,path_length")?;
    for (topic, alts) in rows {
        for (i, a) in alts.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{}",
                topic,
                i + 1,
                crate::pipeline::csv_field(&a.paper_id),
                a.count,
                a.path_length.map(|l| l.to_string()).unwrap_or_default()
            )?;
        }
    }
    Ok(())
}
