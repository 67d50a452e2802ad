use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::LdaConfig;
use super::sampler::AssignmentState;
use crate::corpus::{Ngram, OccurrenceSet};
use crate::stats::{self, Estimate};
use crate::{artifact, Error, Result};

pub const MODEL_FORMAT: &str = "oblit-topic-model";
pub const MODEL_VERSION: u32 = 1;

/// Pooled topic assignments and the fixed co-occurrence counts they came from.
///
/// Vocabulary and document ids are sorted so lookups are binary searches.
/// Sparse rows are `(index, count)` pairs sorted by index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub config: LdaConfig,
    vocabulary: Vec<Ngram>,
    documents: Vec<String>,
    word_totals: Vec<u64>,
    doc_totals: Vec<u64>,
    /// Pooled `n(z)`.
    topic_totals: Vec<f64>,
    /// Per word: pooled `n(z, w)` by topic.
    word_topic: Vec<Vec<(u32, f64)>>,
    /// Per topic: pooled `n(z, d)` by document.
    topic_doc: Vec<Vec<(u32, f64)>>,
    /// Per word: co-occurrence counts by document.
    word_doc: Vec<Vec<(u32, u64)>>,
    /// Per document: co-occurrence counts by word.
    doc_word: Vec<Vec<(u32, u64)>>,
}

/// Sums assignment states sample by sample; the model stores their mean.
pub(crate) struct Pool<'a> {
    data: &'a OccurrenceSet,
    k: usize,
    samples: usize,
    word_topic: BTreeMap<(u32, u32), u64>,
    topic_doc: BTreeMap<(u32, u32), u64>,
    topic: Vec<u64>,
}

impl<'a> Pool<'a> {
    pub(crate) fn new(data: &'a OccurrenceSet, k: usize) -> Self {
        Pool {
            data,
            k,
            samples: 0,
            word_topic: BTreeMap::new(),
            topic_doc: BTreeMap::new(),
            topic: vec![0; k],
        }
    }

    pub(crate) fn samples(&self) -> usize {
        self.samples
    }

    pub(crate) fn add(&mut self, state: &AssignmentState) {
        for (&(w, d), &z) in self.data.tuples.iter().zip(&state.z) {
            *self.word_topic.entry((w, z)).or_default() += 1;
            *self.topic_doc.entry((z, d)).or_default() += 1;
            self.topic[z as usize] += 1;
        }
        self.samples += 1;
    }

    pub(crate) fn finish(self, config: LdaConfig) -> TopicModel {
        let n = self.samples.max(1) as f64;
        let data = self.data;

        // documents sorted by id; remap indices
        let mut order: Vec<u32> = (0..data.documents.len() as u32).collect();
        order.sort_by(|&a, &b| data.documents[a as usize].cmp(&data.documents[b as usize]));
        let mut remap = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let documents: Vec<String> = order
            .iter()
            .map(|&o| data.documents[o as usize].clone())
            .collect();

        let v = data.vocabulary.len();
        let dn = documents.len();
        let mut word_totals = vec![0u64; v];
        let mut doc_totals = vec![0u64; dn];
        let mut wd: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        for &(w, d) in &data.tuples {
            let d = remap[d as usize];
            word_totals[w as usize] += 1;
            doc_totals[d as usize] += 1;
            *wd.entry((w, d)).or_default() += 1;
        }
        let mut word_doc = vec![Vec::new(); v];
        let mut doc_word = vec![Vec::new(); dn];
        for (&(w, d), &c) in &wd {
            word_doc[w as usize].push((d, c));
            doc_word[d as usize].push((w, c));
        }
        for row in &mut doc_word {
            row.sort_by_key(|e| e.0);
        }

        let mut word_topic = vec![Vec::new(); v];
        for (&(w, z), &c) in &self.word_topic {
            word_topic[w as usize].push((z, c as f64 / n));
        }
        let mut topic_doc = vec![Vec::new(); self.k];
        for (&(z, d), &c) in &self.topic_doc {
            topic_doc[z as usize].push((remap[d as usize], c as f64 / n));
        }
        for row in &mut topic_doc {
            row.sort_by_key(|e| e.0);
        }

        TopicModel {
            config,
            vocabulary: data.vocabulary.clone(),
            documents,
            word_totals,
            doc_totals,
            topic_totals: self.topic.iter().map(|&c| c as f64 / n).collect(),
            word_topic,
            topic_doc,
            word_doc,
            doc_word,
        }
    }
}

impl TopicModel {
    /// Model from a single labelled state (no pooling).
    pub fn from_assignment(
        data: &OccurrenceSet,
        num_topics: usize,
        labels: Vec<u32>,
        config: LdaConfig,
    ) -> Result<Self> {
        if labels.len() != data.len() {
            return Err(Error::Config(format!(
                "{} labels for {} tuples",
                labels.len(),
                data.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&z| z as usize >= num_topics) {
            return Err(Error::UnknownTopic(bad as usize));
        }
        let state = AssignmentState::from_labels(data, num_topics, labels);
        let mut pool = Pool::new(data, num_topics);
        pool.add(&state);
        Ok(pool.finish(LdaConfig {
            num_topics,
            ..config
        }))
    }

    pub fn num_topics(&self) -> usize {
        self.topic_totals.len()
    }

    pub fn vocabulary(&self) -> &[Ngram] {
        &self.vocabulary
    }

    pub fn documents(&self) -> &[String] {
        &self.documents
    }

    pub fn total_tuples(&self) -> u64 {
        self.word_totals.iter().sum()
    }

    pub fn word_index(&self, w: &Ngram) -> Result<usize> {
        self.vocabulary
            .binary_search(w)
            .map_err(|_| Error::UnknownNgram(w.to_string()))
    }

    pub fn doc_index(&self, d: &str) -> Result<usize> {
        self.documents
            .binary_search_by(|x| x.as_str().cmp(d))
            .map_err(|_| Error::UnknownPaper(d.to_string()))
    }

    fn check_topic(&self, z: usize) -> Result<()> {
        if z >= self.num_topics() {
            return Err(Error::UnknownTopic(z));
        }
        Ok(())
    }

    pub fn word_count(&self, w: usize) -> u64 {
        self.word_totals[w]
    }

    pub fn doc_count(&self, d: usize) -> u64 {
        self.doc_totals[d]
    }

    /// Pooled `n(z)`.
    pub fn topic_count(&self, z: usize) -> f64 {
        self.topic_totals[z]
    }

    /// Pooled `n(z, w)` for every topic with a nonzero count.
    pub fn word_topics(&self, w: usize) -> &[(u32, f64)] {
        &self.word_topic[w]
    }

    /// Pooled `n(z, d)` for every document with a nonzero count.
    pub fn topic_docs(&self, z: usize) -> &[(u32, f64)] {
        &self.topic_doc[z]
    }

    pub fn word_docs(&self, w: usize) -> &[(u32, u64)] {
        &self.word_doc[w]
    }

    pub fn doc_words(&self, d: usize) -> &[(u32, u64)] {
        &self.doc_word[d]
    }

    pub fn topic_given_word_ix(&self, w: usize, z: usize) -> Estimate {
        let c = self.word_topic[w]
            .binary_search_by_key(&(z as u32), |e| e.0)
            .map(|i| self.word_topic[w][i].1)
            .unwrap_or(0.0);
        stats::proportion(c, self.word_totals[w] as f64)
    }

    pub fn doc_given_topic_ix(&self, d: usize, z: usize) -> Estimate {
        let row = &self.topic_doc[z];
        let c = row
            .binary_search_by_key(&(d as u32), |e| e.0)
            .map(|i| row[i].1)
            .unwrap_or(0.0);
        stats::proportion(c, self.topic_totals[z])
    }

    /// `P(z | w)` with its binomial 95% half-width over the occurrences of `w`.
    pub fn p_topic_given_ngram(&self, w: &Ngram, z: usize) -> Result<Estimate> {
        self.check_topic(z)?;
        let wi = self.word_index(w)?;
        Ok(self.topic_given_word_ix(wi, z))
    }

    /// `P(d | z)` with its binomial 95% half-width over `n(z)`.
    pub fn p_doc_given_topic(&self, d: &str, z: usize) -> Result<Estimate> {
        self.check_topic(z)?;
        if self.topic_totals[z] <= 0.0 {
            return Err(Error::Insufficient(format!("topic {z} is empty")));
        }
        let di = self.doc_index(d)?;
        Ok(self.doc_given_topic_ix(di, z))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        artifact::write(path, MODEL_FORMAT, MODEL_VERSION, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        artifact::read(path, MODEL_FORMAT, MODEL_VERSION, "train")
    }

    pub fn to_json(&self) -> Result<String> {
        artifact::to_string(MODEL_FORMAT, MODEL_VERSION, self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        artifact::from_str(MODEL_FORMAT, MODEL_VERSION, text)
    }
}
