use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::spec::Mode;
use crate::corpus::Ngram;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearPlan {
    pub lag: i32,
    pub year: i32,
    pub n_both: usize,
    pub n_cite_only: usize,
    pub n_mention_only: usize,
    /// Hidden citations that cite an intermediary citing a foundational paper.
    pub n_indirect: usize,
    /// Planted rates at this lag.
    pub p_cite: f64,
    pub p_indirect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicTruth {
    pub topic: usize,
    /// Normalized (stemmed) catchphrases.
    pub catchphrases: Vec<Ngram>,
    pub catchphrase_text: Vec<String>,
    pub foundational: Vec<String>,
    /// Normalized citation weights of the foundational papers.
    pub weights: Vec<f64>,
    pub first_year: i32,
    pub eponym: bool,
    pub review: String,
    pub years: Vec<YearPlan>,
}

impl TopicTruth {
    pub fn totals(&self) -> (usize, usize, usize) {
        self.years.iter().fold((0, 0, 0), |acc, y| {
            (
                acc.0 + y.n_both,
                acc.1 + y.n_cite_only,
                acc.2 + y.n_mention_only,
            )
        })
    }

    pub fn hidden(&self) -> usize {
        self.totals().2
    }

    pub fn explicit(&self) -> usize {
        let (b, c, _) = self.totals();
        b + c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub mode: Mode,
    pub seed: u64,
    pub topics: Vec<TopicTruth>,
    /// Planted hidden citations per foundational paper.
    pub hidden_attribution: BTreeMap<String, f64>,
    /// Non-foundational cited papers with their number of citing contexts.
    pub background_papers: Vec<(String, usize)>,
    /// Foundational papers whose title contains a catchphrase.
    pub title_catchphrase_papers: BTreeSet<String>,
    pub scaling_exponent: Option<f64>,
}

impl GroundTruth {
    /// `(topic, catchphrase, foundational paper)` for every planted pair.
    pub fn planted_pairs(&self) -> Vec<(usize, Ngram, String)> {
        let mut out = Vec::new();
        for t in &self.topics {
            for c in &t.catchphrases {
                for f in &t.foundational {
                    out.push((t.topic, c.clone(), f.clone()));
                }
            }
        }
        out
    }

    /// True when `g` is a contiguous piece of some planted catchphrase.
    pub fn is_planted_subphrase(&self, g: &Ngram) -> bool {
        let needle: Vec<&str> = g.stems().collect();
        self.topics.iter().flat_map(|t| &t.catchphrases).any(|c| {
            let hay: Vec<&str> = c.stems().collect();
            hay.windows(needle.len()).any(|w| w == needle.as_slice())
        })
    }

    pub fn foundational_ids(&self) -> BTreeSet<&str> {
        self.topics
            .iter()
            .flat_map(|t| t.foundational.iter().map(String::as_str))
            .collect()
    }

    /// Line-oriented records tagged by `kind`.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "lowercase")]
        enum Line<'a> {
            Meta {
                mode: String,
                seed: u64,
                topics: usize,
                scaling_exponent: Option<f64>,
            },
            Topic {
                topic: usize,
                catchphrases: &'a [Ngram],
                catchphrase_text: &'a [String],
                foundational: &'a [String],
                weights: &'a [f64],
                first_year: i32,
                eponym: bool,
                review: &'a str,
            },
            Year {
                topic: usize,
                #[serde(flatten)]
                plan: &'a YearPlan,
            },
            Attribution {
                paper_id: &'a str,
                hidden: f64,
            },
            Background {
                paper_id: &'a str,
                citations: usize,
            },
            Title {
                paper_id: &'a str,
            },
        }
        let mut put = |line: Line<'_>| -> std::io::Result<()> {
            serde_json::to_writer(&mut w, &line)?;
            w.write_all(b"\n")
        };
        put(Line::Meta {
            mode: self.mode.to_string(),
            seed: self.seed,
            topics: self.topics.len(),
            scaling_exponent: self.scaling_exponent,
        })?;
        for t in &self.topics {
            put(Line::Topic {
                topic: t.topic,
                catchphrases: &t.catchphrases,
                catchphrase_text: &t.catchphrase_text,
                foundational: &t.foundational,
                weights: &t.weights,
                first_year: t.first_year,
                eponym: t.eponym,
                review: &t.review,
            })?;
            for y in &t.years {
                put(Line::Year {
                    topic: t.topic,
                    plan: y,
                })?;
            }
        }
        for (id, h) in &self.hidden_attribution {
            put(Line::Attribution {
                paper_id: id,
                hidden: *h,
            })?;
        }
        for (id, c) in &self.background_papers {
            put(Line::Background {
                paper_id: id,
                citations: *c,
            })?;
        }
        for id in &self.title_catchphrase_papers {
            put(Line::Title { paper_id: id })?;
        }
        Ok(())
    }
}
