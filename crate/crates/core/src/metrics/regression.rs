use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::{Error, Result};

/// Ordinary least squares line with 95% slope interval and single-observation
/// prediction bands, all in the fitted (transformed) space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
    /// `None` for a two-point (exactly interpolated) fit.
    pub slope_halfwidth: Option<f64>,
    pub residual_sd: Option<f64>,
    t_crit: Option<f64>,
    x_mean: f64,
    sxx: f64,
    x_min: f64,
    x_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPoint {
    pub x: f64,
    pub fit: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl RegressionFit {
    pub fn is_degenerate(&self) -> bool {
        self.slope_halfwidth.is_none()
    }

    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }

    /// `fit ± t * s * sqrt(1 + 1/n + (x - mean)^2 / Sxx)`.
    pub fn prediction_band(&self, x: f64) -> Option<(f64, f64)> {
        let (t, s) = (self.t_crit?, self.residual_sd?);
        let half = t * s * (1.0 + 1.0 / self.n as f64 + (x - self.x_mean).powi(2) / self.sxx).sqrt();
        let y = self.predict(x);
        Some((y - half, y + half))
    }

    pub fn slope_covers(&self, value: f64) -> bool {
        self.slope_halfwidth
            .is_some_and(|h| (self.slope - value).abs() <= h)
    }

    /// Band evaluated at `count` evenly spaced abscissae across the data range.
    pub fn band_samples(&self, count: usize) -> Vec<BandPoint> {
        (0..count)
            .map(|i| {
                let x = if count == 1 {
                    self.x_min
                } else {
                    self.x_min + (self.x_max - self.x_min) * i as f64 / (count - 1) as f64
                };
                let band = self.prediction_band(x);
                BandPoint {
                    x,
                    fit: self.predict(x),
                    lower: band.map(|b| b.0),
                    upper: band.map(|b| b.1),
                }
            })
            .collect()
    }
}

pub fn ols(xs: &[f64], ys: &[f64]) -> Result<RegressionFit> {
    if xs.len() != ys.len() {
        return Err(Error::Insufficient("regression inputs differ in length".into()));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::Insufficient("regression needs at least 2 points".into()));
    }
    let nf = n as f64;
    let x_mean = xs.iter().sum::<f64>() / nf;
    let y_mean = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Insufficient("all abscissae are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let (mut slope_halfwidth, mut residual_sd, mut t_crit) = (None, None, None);
    if n > 2 {
        let sse: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        let df = (n - 2) as f64;
        let s = (sse / df).sqrt();
        let t = StudentsT::new(0.0, 1.0, df)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.975);
        slope_halfwidth = Some(t * s / sxx.sqrt());
        residual_sd = Some(s);
        t_crit = Some(t);
    }
    Ok(RegressionFit {
        slope,
        intercept,
        n,
        slope_halfwidth,
        residual_sd,
        t_crit,
        x_mean,
        sxx,
        x_min: xs.iter().copied().fold(f64::INFINITY, f64::min),
        x_max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// OLS of `log10 h` on `log10 c`.
pub fn loglog_fit(c: &[f64], h: &[f64]) -> Result<RegressionFit> {
    let lx = log10_all(c, "c")?;
    let ly = log10_all(h, "h")?;
    ols(&lx, &ly)
}

/// OLS of `p` on `log10 mentions`.
pub fn loglinear_fit(mentions: &[f64], p: &[f64]) -> Result<RegressionFit> {
    let lx = log10_all(mentions, "mentions")?;
    if let Some(i) = p.iter().position(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::bad_value(i, "p", format!("{} is not a probability", p[i])));
    }
    ols(&lx, p)
}

fn log10_all(xs: &[f64], name: &str) -> Result<Vec<f64>> {
    xs.iter()
        .enumerate()
        .map(|(i, &v)| {
            if v.is_finite() && v > 0.0 {
                Ok(v.log10())
            } else {
                Err(Error::bad_value(i, name, format!("{v} is not a positive count")))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_power_law() {
        let c: Vec<f64> = [3.0, 10.0, 42.0, 100.0, 900.0].to_vec();
        let h: Vec<f64> = c.iter().map(|x: &f64| x.powf(0.763)).collect();
        let f = loglog_fit(&c, &h).unwrap();
        assert!((f.slope - 0.763).abs() < 1e-9);
        assert!(f.residual_sd.unwrap() < 1e-9);
    }

    #[test]
    fn two_points_are_degenerate() {
        let f = ols(&[0.0, 1.0], &[1.0, 3.0]).unwrap();
        assert_eq!(f.slope, 2.0);
        assert!(f.is_degenerate());
        assert!(f.prediction_band(0.5).is_none());
    }

    #[test]
    fn loglinear_constant_and_slope() {
        let m = [1.0, 10.0, 100.0, 1000.0];
        let f = loglinear_fit(&m, &[0.4; 4]).unwrap();
        assert_eq!(f.slope, 0.0);
        let p: Vec<f64> = m.iter().map(|x: &f64| 0.9 - 0.27 * x.log10()).collect();
        let f = loglinear_fit(&m, &p).unwrap();
        assert!((f.slope + 0.27).abs() < 1e-12);
    }

    #[test]
    fn bad_counts_name_index() {
        let err = loglog_fit(&[1.0, 0.0, 2.0], &[1.0, 1.0, 1.0]).unwrap_err();
        assert!(err.to_string().contains("c[1]"), "{err}");
        assert!(loglinear_fit(&[1.0, 2.0, 3.0], &[0.1, 1.2, 0.3]).is_err());
    }

    #[test]
    fn band_is_symmetric_and_widest_at_edges() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let ys = [0.1, 0.9, 2.2, 2.8, 4.1];
        let f = ols(&xs, &ys).unwrap();
        let samples = f.band_samples(100);
        assert_eq!(samples.len(), 100);
        for s in &samples {
            let (lo, hi) = (s.lower.unwrap(), s.upper.unwrap());
            assert!(((hi - s.fit) - (s.fit - lo)).abs() < 1e-12);
        }
        let w = |p: &BandPoint| p.upper.unwrap() - p.lower.unwrap();
        assert!(w(&samples[0]) > w(&samples[50]));
    }
}
