use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::LdaConfig;
use crate::corpus::OccurrenceSet;
use crate::{Error, Result};

/// Current topic labels with their count tables.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentState {
    pub num_topics: usize,
    pub z: Vec<u32>,
    /// `n(d, z)`, row-major by document.
    pub doc_topic: Vec<u32>,
    /// `n(z, w)`, stored row-major by word.
    pub word_topic: Vec<u32>,
    /// `n(z)`.
    pub topic: Vec<u32>,
}

impl AssignmentState {
    pub fn from_labels(data: &OccurrenceSet, num_topics: usize, z: Vec<u32>) -> Self {
        let k = num_topics;
        let mut s = AssignmentState {
            num_topics: k,
            z: Vec::new(),
            doc_topic: vec![0; data.documents.len() * k],
            word_topic: vec![0; data.vocabulary.len() * k],
            topic: vec![0; k],
        };
        for (&(w, d), &t) in data.tuples.iter().zip(&z) {
            let t = t as usize;
            s.doc_topic[d as usize * k + t] += 1;
            s.word_topic[w as usize * k + t] += 1;
            s.topic[t] += 1;
        }
        s.z = z;
        s
    }

    pub fn n_doc_topic(&self, d: usize, z: usize) -> u32 {
        self.doc_topic[d * self.num_topics + z]
    }

    pub fn n_word_topic(&self, w: usize, z: usize) -> u32 {
        self.word_topic[w * self.num_topics + z]
    }

    /// Checks that every count table agrees with the labels.
    pub fn check(&self, data: &OccurrenceSet) -> std::result::Result<(), String> {
        let rebuilt = AssignmentState::from_labels(data, self.num_topics, self.z.clone());
        if rebuilt != *self {
            return Err("count tables disagree with labels".into());
        }
        let k = self.num_topics;
        for d in 0..data.documents.len() {
            let rows: u32 = self.doc_topic[d * k..(d + 1) * k].iter().sum();
            let n = data.tuples.iter().filter(|t| t.1 as usize == d).count() as u32;
            if rows != n {
                return Err(format!("document {d}: {rows} != {n}"));
            }
        }
        for t in 0..k {
            let s: u32 = (0..data.vocabulary.len()).map(|w| self.n_word_topic(w, t)).sum();
            if s != self.topic[t] {
                return Err(format!("topic {t}: word counts {s} != {}", self.topic[t]));
            }
        }
        if self.topic.iter().map(|&c| c as usize).sum::<usize>() != data.len() {
            return Err("topic totals do not sum to tuple count".into());
        }
        Ok(())
    }
}

/// One collapsed Gibbs chain.
pub struct Sampler<'a> {
    data: &'a OccurrenceSet,
    alpha: f64,
    beta: f64,
    v_beta: f64,
    state: AssignmentState,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl<'a> Sampler<'a> {
    /// Draws initial labels uniformly from the seeded generator.
    pub fn new(data: &'a OccurrenceSet, config: &LdaConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        if data.is_empty() {
            return Err(Error::Insufficient("no occurrence tuples to train on".into()));
        }
        if config.num_topics > data.len() {
            return Err(Error::Config(format!(
                "{} topics requested for {} tuples",
                config.num_topics,
                data.len()
            )));
        }
        let k = config.num_topics;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z: Vec<u32> = (0..data.len())
            .map(|_| rng.random_range(0..k as u32))
            .collect();
        Ok(Sampler {
            data,
            alpha: config.alpha,
            beta: config.beta,
            v_beta: data.vocabulary.len() as f64 * config.beta,
            state: AssignmentState::from_labels(data, k, z),
            rng,
            weights: vec![0.0; k],
        })
    }

    pub fn state(&self) -> &AssignmentState {
        &self.state
    }

    /// Resamples every tuple's topic once, in tuple order.
    pub fn sweep(&mut self) {
        let k = self.state.num_topics;
        let s = &mut self.state;
        for (i, &(w, d)) in self.data.tuples.iter().enumerate() {
            let (w, d) = (w as usize, d as usize);
            let old = s.z[i] as usize;
            s.doc_topic[d * k + old] -= 1;
            s.word_topic[w * k + old] -= 1;
            s.topic[old] -= 1;

            let dt = &s.doc_topic[d * k..(d + 1) * k];
            let wt = &s.word_topic[w * k..(w + 1) * k];
            let mut total = 0.0;
            for t in 0..k {
                total += (dt[t] as f64 + self.alpha) * (wt[t] as f64 + self.beta)
                    / (s.topic[t] as f64 + self.v_beta);
                self.weights[t] = total;
            }
            let u = self.rng.random::<f64>() * total;
            let new = self.weights.iter().position(|&c| u < c).unwrap_or(k - 1);

            s.z[i] = new as u32;
            s.doc_topic[d * k + new] += 1;
            s.word_topic[w * k + new] += 1;
            s.topic[new] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> OccurrenceSet {
        OccurrenceSet::from_pairs(
            [("a", "d1"), ("b", "d1"), ("a", "d2"), ("c", "d3"), ("c", "d3")]
                .iter()
                .map(|&(w, d)| (w, d)),
        )
    }

    #[test]
    fn counts_stay_consistent() {
        let data = data();
        let mut cfg = LdaConfig::with_topics(3);
        cfg.alpha = 0.5;
        let mut s = Sampler::new(&data, &cfg, 11).unwrap();
        s.state().check(&data).unwrap();
        for _ in 0..50 {
            s.sweep();
            s.state().check(&data).unwrap();
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let empty = OccurrenceSet::default();
        assert!(Sampler::new(&empty, &LdaConfig::with_topics(1), 0).is_err());
        assert!(Sampler::new(&data(), &LdaConfig::with_topics(6), 0).is_err());
    }
}
