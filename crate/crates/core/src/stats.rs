//! Binomial proportion estimates.

use serde::{Deserialize, Serialize};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.576;

/// `hits` successes in `samples` Bernoulli trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub hits: u64,
    pub samples: u64,
}

impl Proportion {
    pub fn new(hits: u64, samples: u64) -> Self {
        assert!(hits <= samples, "{hits} hits out of {samples}");
        Proportion { hits, samples }
    }

    pub fn estimate(&self) -> f64 {
        if self.samples == 0 {
            return f64::NAN;
        }
        self.hits as f64 / self.samples as f64
    }

    /// Standard deviation of the count under success probability `p`.
    pub fn count_sd(&self, p: f64) -> f64 {
        (self.samples as f64 * p * (1.0 - p)).sqrt()
    }

    /// Distance of the count from its mean under `p`, in standard deviations.
    pub fn z_score(&self, p: f64) -> f64 {
        (self.hits as f64 - self.samples as f64 * p) / self.count_sd(p)
    }

    /// Wilson score interval at normal quantile `z`.
    pub fn wilson(&self, z: f64) -> (f64, f64) {
        if self.samples == 0 {
            return (0.0, 1.0);
        }
        let m = self.samples as f64;
        let p = self.estimate();
        let z2 = z * z;
        let denom = 1.0 + z2 / m;
        let centre = (p + z2 / (2.0 * m)) / denom;
        let half = z * (p * (1.0 - p) / m + z2 / (4.0 * m * m)).sqrt() / denom;
        let lo = if self.hits == 0 { 0.0 } else { (centre - half).max(0.0) };
        let hi = if self.hits == self.samples { 1.0 } else { (centre + half).min(1.0) };
        (lo, hi)
    }
}
