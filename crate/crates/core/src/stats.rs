//! Small statistical helpers shared across modules.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;

/// A point estimate together with a symmetric 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub halfwidth: f64,
}

/// Binomial proportion with the normal-approximation 95% half-width,
/// `1.96 * sqrt(p (1 - p) / n)`. Counts may be fractional (pooled means).
pub fn proportion(count: f64, total: f64) -> Estimate {
    debug_assert!(total > 0.0);
    let p = (count / total).clamp(0.0, 1.0);
    Estimate {
        estimate: p,
        halfwidth: Z95 * (p * (1.0 - p) / total).sqrt(),
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean and `1.96 * standard error`; the half-width is `None` for fewer than
/// two values.
pub fn mean_with_halfwidth(xs: &[f64]) -> (f64, Option<f64>) {
    let m = mean(xs);
    if xs.len() < 2 {
        return (m, None);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, Some(Z95 * (var / xs.len() as f64).sqrt()))
}

/// Shannon entropy in bits of a nonnegative weight vector (normalized here).
/// Zero weights contribute nothing.
pub fn entropy_bits<I: IntoIterator<Item = f64>>(weights: I) -> f64 {
    let ws: Vec<f64> = weights.into_iter().filter(|w| *w > 0.0).collect();
    let total: f64 = ws.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let h = -ws
        .iter()
        .map(|w| {
            let p = w / total;
            p * p.log2()
        })
        .sum::<f64>();
    h.max(0.0)
}

/// Splits `total` into integer parts proportional to `weights` (largest
/// remainder, ties to the lower index).
pub fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut parts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut left = total - parts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for i in order {
        if left == 0 {
            break;
        }
        parts[i] += 1;
        left -= 1;
    }
    parts
}
