use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub num_topics: usize,
    /// Document-topic smoothing.
    pub alpha: f64,
    /// Topic-term smoothing.
    pub beta: f64,
    pub burn_in_sweeps: usize,
    pub retained_samples: usize,
    pub sample_lag_sweeps: usize,
    pub seed: u64,
    /// Chains beyond the first only feed the convergence diagnostic.
    pub chains: usize,
}

impl Default for LdaConfig {
    fn default() -> Self {
        Self::with_topics(400)
    }
}

impl LdaConfig {
    /// Defaults with `alpha = 50 / K`.
    pub fn with_topics(num_topics: usize) -> Self {
        Self {
            num_topics,
            alpha: 50.0 / num_topics.max(1) as f64,
            beta: 0.01,
            burn_in_sweeps: 500,
            retained_samples: 20,
            sample_lag_sweeps: 10,
            seed: 0,
            chains: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_topics == 0 {
            return Err(Error::Config("lda.topics must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config("lda.alpha must be positive".into()));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Config("lda.beta must be positive".into()));
        }
        if self.retained_samples == 0 {
            return Err(Error::Config("lda.samples must be at least 1".into()));
        }
        if self.sample_lag_sweeps == 0 {
            return Err(Error::Config("lda.lag must be at least 1".into()));
        }
        if self.chains == 0 {
            return Err(Error::Config("lda.chains must be at least 1".into()));
        }
        Ok(())
    }
}

/// Seed for chain `index`; chain 0 uses the configured seed unchanged.
pub fn chain_seed(seed: u64, index: usize) -> u64 {
    if index == 0 {
        return seed;
    }
    // splitmix64 step
    let mut z = seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
