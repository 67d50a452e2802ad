//! Collapsed Gibbs sampling over occurrence tuples.
//!
//! Topic `k` for a tuple `(w, d)` is drawn with weight
//! `(n(d,k) + alpha) * (n(k,w) + beta) / (n(k) + V * beta)`, counts excluding
//! the tuple itself. After the burn-in, every `lag`-th state is pooled; the
//! model keeps the mean counts over the pooled states.

mod config;
mod model;
mod sampler;

use pathfinding::prelude::{kuhn_munkres, Matrix};
use rayon::prelude::*;

pub use config::{chain_seed, LdaConfig};
pub use model::{TopicModel, MODEL_FORMAT, MODEL_VERSION};
pub use sampler::{AssignmentState, Sampler};

use crate::corpus::OccurrenceSet;
use crate::Result;
use model::Pool;

/// Result of [`train`]: the first chain's model plus, when several chains ran,
/// the largest total-variation distance between chain 0 and any other chain
/// after optimal topic matching.
#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub model: TopicModel,
    pub max_tv_distance: Option<f64>,
}

/// Runs one chain with the configured seed.
pub fn gibbs_train(data: &OccurrenceSet, config: &LdaConfig) -> Result<TopicModel> {
    run_chain(data, config, config.seed)
}

fn run_chain(data: &OccurrenceSet, config: &LdaConfig, seed: u64) -> Result<TopicModel> {
    let mut sampler = Sampler::new(data, config, seed)?;
    for _ in 0..config.burn_in_sweeps {
        sampler.sweep();
    }
    let mut pool = Pool::new(data, config.num_topics);
    while pool.samples() < config.retained_samples {
        for _ in 0..config.sample_lag_sweeps {
            sampler.sweep();
        }
        pool.add(sampler.state());
    }
    Ok(pool.finish(*config))
}


/// Runs `config.chains` independent chains in parallel. Only chain 0 is
/// returned as the model; the rest feed the convergence diagnostic.
pub fn train(data: &OccurrenceSet, config: &LdaConfig) -> Result<TrainOutput> {
    config.validate()?;
    let models: Vec<TopicModel> = (0..config.chains)
        .into_par_iter()
        .map(|c| run_chain(data, config, chain_seed(config.seed, c)))
        .collect::<Result<_>>()?;
    let max_tv_distance = models[1..]
        .iter()
        .map(|other| chain_distance(&models[0], other))
        .reduce(f64::max);
    let model = models.into_iter().next().expect("at least one chain");
    Ok(TrainOutput {
        model,
        max_tv_distance,
    })
}

/// Largest total-variation distance between the per-word topic distributions
/// of two models over the same data, after matching topics with the Hungarian
/// algorithm on pooled word-topic overlap.
pub fn chain_distance(a: &TopicModel, b: &TopicModel) -> f64 {
    let k = a.num_topics();
    let mut overlap = vec![vec![0.0f64; k]; k];
    for w in 0..a.vocabulary().len() {
        for &(za, ca) in a.word_topics(w) {
            for &(zb, cb) in b.word_topics(w) {
                overlap[za as usize][zb as usize] += ca.min(cb);
            }
        }
    }
    let weights = Matrix::from_rows(
        overlap
            .iter()
            .map(|row| row.iter().map(|x| (x * 1000.0).round() as i64).collect::<Vec<_>>()),
    )
    .expect("square matrix");
    let (_, perm) = kuhn_munkres(&weights);

    let mut worst = 0.0f64;
    for w in 0..a.vocabulary().len() {
        let n = a.word_count(w) as f64;
        let mut pa = vec![0.0; k];
        let mut pb = vec![0.0; k];
        for &(z, c) in a.word_topics(w) {
            pa[z as usize] = c / n;
        }
        for &(z, c) in b.word_topics(w) {
            pb[z as usize] = c / n;
        }
        let tv = 0.5 * (0..k).map(|z| (pa[z] - pb[perm[z]]).abs()).sum::<f64>();
        worst = worst.max(tv);
    }
    worst
}
