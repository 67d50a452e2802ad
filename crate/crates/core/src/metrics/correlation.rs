use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PermutationConfig {
    pub permutations: usize,
    pub seed: u64,
    /// Null hypothesis rejected when `p < significance`.
    pub significance: f64,
}

impl Default for PermutationConfig {
    fn default() -> Self {
        Self {
            permutations: 10_000,
            seed: 0,
            significance: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spearman {
    pub rho: f64,
    pub p_value: f64,
    pub rejects_null: bool,
}

/// Ranks starting at 1; tied values share the mean of their positions.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho (Pearson correlation of average ranks) with a two-sided
/// permutation p-value, `(hits + 1) / (permutations + 1)`.
pub fn spearman(xs: &[f64], ys: &[f64], config: &PermutationConfig) -> Result<Spearman> {
    if xs.len() != ys.len() {
        return Err(Error::Insufficient(format!(
            "length mismatch: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::Insufficient("spearman needs at least 3 points".into()));
    }
    let rx = average_ranks(xs);
    let mut ry = average_ranks(ys);
    let rho = pearson(&rx, &ry)
        .ok_or_else(|| Error::Insufficient("constant input has no rank correlation".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut hits = 0usize;
    for _ in 0..config.permutations {
        ry.shuffle(&mut rng);
        let r = pearson(&rx, &ry).unwrap_or(0.0);
        if r.abs() >= rho.abs() - 1e-12 {
            hits += 1;
        }
    }
    let p_value = (hits + 1) as f64 / (config.permutations + 1) as f64;
    Ok(Spearman {
        rho,
        p_value,
        rejects_null: p_value < config.significance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_average_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 5.0]), [2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn perfect_correlations() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let cfg = PermutationConfig {
            permutations: 500,
            ..Default::default()
        };
        let s = spearman(&xs, &ys, &cfg).unwrap();
        assert_eq!(s.rho, 1.0);
        assert!(s.rejects_null);
        let rev: Vec<f64> = ys.iter().rev().copied().collect();
        assert_eq!(spearman(&xs, &rev, &cfg).unwrap().rho, -1.0);
    }

    #[test]
    fn errors() {
        let cfg = PermutationConfig::default();
        assert!(spearman(&[1.0, 2.0], &[1.0, 2.0], &cfg).is_err());
        assert!(spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0], &cfg).is_err());
    }
}
