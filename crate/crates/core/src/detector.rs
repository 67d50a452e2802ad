//! Catchphrases, foundational papers and exclusivity entropies.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Ngram};
use crate::stats::{entropy_bits, Estimate};
use crate::topicmodel::TopicModel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub p_th_catch: f64,
    pub p_th_found: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            p_th_catch: 0.95,
            p_th_found: 0.05,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p_catch", self.p_th_catch), ("p_found", self.p_th_found)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Config(format!("detector.{name} must lie in (0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catchphrase {
    pub ngram: Ngram,
    #[serde(flatten)]
    pub p: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoundationalPaper {
    pub paper_id: String,
    #[serde(flatten)]
    pub p: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicProfile {
    pub topic_id: usize,
    /// Sorted by estimate descending, then n-gram.
    pub catchphrases: Vec<Catchphrase>,
    /// Sorted by estimate descending, then paper id.
    pub foundational_papers: Vec<FoundationalPaper>,
    pub first_foundational_year: i32,
}

impl TopicProfile {
    pub fn is_foundational(&self, paper_id: &str) -> bool {
        self.foundational_papers.iter().any(|f| f.paper_id == paper_id)
    }

    pub fn catchphrase_ngrams(&self) -> impl Iterator<Item = &Ngram> {
        self.catchphrases.iter().map(|c| &c.ngram)
    }
}

/// Thresholds the pooled estimates; topics lacking a catchphrase or a
/// foundational paper are dropped.
pub fn detect_topics(
    model: &TopicModel,
    corpus: &Corpus,
    config: &DetectorConfig,
) -> Result<Vec<TopicProfile>> {
    config.validate()?;
    let k = model.num_topics();
    let mut catch: Vec<Vec<Catchphrase>> = vec![Vec::new(); k];
    for (wi, w) in model.vocabulary().iter().enumerate() {
        for &(z, _) in model.word_topics(wi) {
            let p = model.topic_given_word_ix(wi, z as usize);
            if p.estimate > config.p_th_catch {
                catch[z as usize].push(Catchphrase {
                    ngram: w.clone(),
                    p,
                });
            }
        }
    }

    let mut out = Vec::new();
    for (z, mut catchphrases) in catch.into_iter().enumerate() {
        if catchphrases.is_empty() || model.topic_count(z) <= 0.0 {
            continue;
        }
        let mut found: Vec<FoundationalPaper> = model
            .topic_docs(z)
            .iter()
            .map(|&(d, _)| FoundationalPaper {
                paper_id: model.documents()[d as usize].clone(),
                p: model.doc_given_topic_ix(d as usize, z),
            })
            .filter(|f| f.p.estimate > config.p_th_found)
            .collect();
        if found.is_empty() {
            continue;
        }
        catchphrases.sort_by(|a, b| {
            b.p.estimate
                .total_cmp(&a.p.estimate)
                .then_with(|| a.ngram.cmp(&b.ngram))
        });
        found.sort_by(|a, b| {
            b.p.estimate
                .total_cmp(&a.p.estimate)
                .then_with(|| a.paper_id.cmp(&b.paper_id))
        });
        let first_foundational_year = found
            .iter()
            .map(|f| corpus.require(&f.paper_id).map(|p| p.year))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .expect("nonempty");
        out.push(TopicProfile {
            topic_id: z,
            catchphrases,
            foundational_papers: found,
            first_foundational_year,
        });
    }
    Ok(out)
}

/// `S(d | w)` in bits over the co-occurrence counts of `w`.
pub fn entropy_doc_given_ngram(model: &TopicModel, w: &Ngram) -> Result<f64> {
    let wi = model.word_index(w)?;
    Ok(entropy_bits(model.word_docs(wi).iter().map(|&(_, c)| c as f64)))
}

/// `S(w | d)` in bits over the co-occurrence counts of `d`.
pub fn entropy_ngram_given_doc(model: &TopicModel, d: &str) -> Result<f64> {
    let di = model.doc_index(d)?;
    Ok(entropy_bits(model.doc_words(di).iter().map(|&(_, c)| c as f64)))
}

/// One line per catchphrase and foundational paper:
/// `topic_id,kind,value,estimate,halfwidth`.
pub fn write_profiles_csv<W: Write>(mut w: W, profiles: &[TopicProfile]) -> std::io::Result<()> {
    writeln!(w, "topic_id,kind,value,estimate,halfwidth")?;
    for p in profiles {
        for c in &p.catchphrases {
            writeln!(
                w,
                "{},catchphrase,{},{},{}",
                p.topic_id, c.ngram, c.p.estimate, c.p.halfwidth
            )?;
        }
        for f in &p.foundational_papers {
            writeln!(
                w,
                "{},foundational,{},{},{}",
                p.topic_id,
                crate::pipeline::csv_field(&f.paper_id),
                f.p.estimate,
                f.p.halfwidth
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{OccurrenceSet, PaperRecord};
    use crate::topicmodel::LdaConfig;

    fn build(rows: &[(&str, &str, u32, usize)], k: usize) -> TopicModel {
        let mut pairs = Vec::new();
        let mut labels = Vec::new();
        for &(w, d, z, n) in rows {
            for _ in 0..n {
                pairs.push((w, d));
                labels.push(z);
            }
        }
        let data = OccurrenceSet::from_pairs(pairs);
        TopicModel::from_assignment(&data, k, labels, LdaConfig::with_topics(k)).unwrap()
    }

    fn corpus(ids: &[(&str, i32)]) -> Corpus {
        Corpus::new(ids.iter().map(|&(id, y)| PaperRecord::new(id, y)).collect()).unwrap()
    }

    #[test]
    fn thresholds_select_pairs() {
        // "qd" is 998/1000 topic 0; doc f is 215/1000 of topic 0
        let m = build(
            &[
                ("qd", "f", 0, 215),
                ("qd", "g", 0, 783),
                ("qd", "g", 1, 2),
                ("noise", "h", 1, 10),
                ("noise", "h", 0, 2),
            ],
            2,
        );
        let c = corpus(&[("f", 1999), ("g", 2003), ("h", 2001)]);
        let profiles = detect_topics(&m, &c, &DetectorConfig::default()).unwrap();
        // topic 1's best n-gram is "noise" at 10/12 < 0.95, so it is dropped
        assert_eq!(profiles.len(), 1);
        let p0 = &profiles[0];
        assert_eq!(p0.catchphrases[0].ngram, Ngram::from("qd"));
        assert!(p0.is_foundational("f"));
        assert_eq!(p0.first_foundational_year, 1999);
        assert_eq!(p0.foundational_papers[0].paper_id, "g");
    }

    #[test]
    fn topic_below_threshold_discarded() {
        let m = build(&[("w", "d", 0, 9), ("w", "d", 1, 1)], 2);
        let c = corpus(&[("d", 2000)]);
        assert!(detect_topics(&m, &c, &DetectorConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn entropies() {
        let mut rows: Vec<(String, String, u32, usize)> = Vec::new();
        for i in 0..16 {
            rows.push(("u".into(), format!("d{i:02}"), 0, 3));
        }
        rows.push(("solo".into(), "d00".into(), 0, 4));
        for (d, n) in [("a", 2), ("b", 1), ("c", 1)] {
            rows.push(("mix".into(), d.into(), 0, n));
        }
        for i in 0..8 {
            rows.push((format!("g{i}"), "eight".into(), 0, 1));
        }
        let rows: Vec<(&str, &str, u32, usize)> = rows
            .iter()
            .map(|(w, d, z, n)| (w.as_str(), d.as_str(), *z, *n))
            .collect();
        let m = build(&rows, 1);
        let s = |w: &str| entropy_doc_given_ngram(&m, &Ngram::from(w)).unwrap();
        assert!((s("u") - 4.0).abs() < 1e-12);
        assert_eq!(s("solo"), 0.0);
        assert!((s("mix") - 1.5).abs() < 1e-12);
        assert!((entropy_ngram_given_doc(&m, "eight").unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(entropy_ngram_given_doc(&m, "b").unwrap(), 0.0);
        assert!(entropy_doc_given_ngram(&m, &Ngram::from("nope")).is_err());
    }
}
